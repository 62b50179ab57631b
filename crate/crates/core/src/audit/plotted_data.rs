//! Plotted coordinates `(n, g_n(λ))` of the accessory-parameter figure, as
//! printed (10 decimals).

pub const PLOTTED_COORDINATES: [(&str, [&str; 21]); 5] = [
    (
        "0",
        ["1.0000000000", "0.0000000000", "-0.1250000000", "-0.1481481481", "-0.1486545139", "-0.1429675926", "-0.1357052282", "-0.1283623497", "-0.1214375331", "-0.1150747842", "-0.1092855925", "-0.1040329003", "-0.0992645391", "-0.0949267298", "-0.0909693168", "-0.0873474854", "-0.0840219871", "-0.0809587641", "-0.0781283677", "-0.0755053452", "-0.0730676679"],
    ),
    (
        "1/4",
        ["1.0000000000", "0.2500000000", "0.1015625000", "0.0472366898", "0.0215502138", "0.0075798300", "-0.0007066607", "-0.0059110690", "-0.0093081418", "-0.0115822913", "-0.0131272190", "-0.0141819223", "-0.0148978786", "-0.0153745397", "-0.0156791405", "-0.0158582686", "-0.0159448871", "-0.0159627403", "-0.0159291968", "-0.0158571311", "-0.0157561965"],
    ),
    (
        "1/2",
        ["1.0000000000", "0.5000000000", "0.3437500000", "0.2656250000", "0.2181396484", "0.1859741211", "0.1626243591", "0.1448383331", "0.1308014300", "0.1194177447", "0.1099845695", "0.1020296386", "0.0952232995", "0.0893281492", "0.0841686830", "0.0796122323", "0.0755565656", "0.0719215780", "0.0686435736", "0.0656712412", "0.0629627641"],
    ),
    (
        "3/4",
        ["1.0000000000", "0.7500000000", "0.6015625000", "0.5074508102", "0.4419784546", "0.3934293411", "0.3557712706", "0.3255738546", "0.3007337684", "0.2798844163", "0.2620963077", "0.2467134409", "0.2332585093", "0.2213752418", "0.2107918742", "0.2012971943", "0.1927243605", "0.1849396876", "0.1778346966", "0.1713203665", "0.1653229030"],
    ),
    (
        "1",
        ["1.0000000000", "1.0000000000", "0.8750000000", "0.7731481481", "0.6939380787", "0.6311765046", "0.5802455820", "0.5380223961", "0.5023803853", "0.4718347712", "0.4453205057", "0.4220541866", "0.4014465092", "0.3830453144", "0.3664975689", "0.3515233526", "0.3378976617", "0.3254374148", "0.3139920052", "0.3034363142", "0.2936654673"],
    ),
];
