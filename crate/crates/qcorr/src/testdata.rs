//! Frozen numeric fixtures used by the unit tests. Values were computed
//! with an independent straight-line implementation of every estimator and
//! checked against closed forms where available.

// Bivariate/trivariate fixture: equicorrelated normal triple, n=40.
pub const FX_X: [f64; 40] = [
    0.00123, -0.890592, 0.060144, -0.620475, 0.105414, 0.695303,
    -1.901223, -0.235091, 0.156751, -0.538693, -1.530136, -0.808837,
    -0.032522, -0.111702, -1.225056, -1.547145, -0.64147, -1.199289,
    -0.188782, 0.667248, 0.203139, -1.187195, 0.898764, -0.794642,
    -0.46317, 0.689404, -0.250195, -0.30368, -0.197284, -0.443581,
    -0.024144, 1.052126, -1.290893, -2.035329, 0.164053, -0.623944,
    -0.176406, 0.519908, 0.035287, -0.857956,
];
pub const FX_Y: [f64; 40] = [
    0.259336, -0.839052, 1.190732, 0.113978, -0.753102, -0.816472,
    -2.067384, -1.215186, -0.083511, -0.311349, -1.178814, 0.514347,
    0.749643, 0.039814, -0.546589, -0.029325, 1.411676, -0.535112,
    0.497027, 1.579421, -0.299667, -1.095287, 1.441173, 0.162914,
    -0.315838, 0.061327, 1.194317, 0.153511, -1.063453, 0.788106,
    0.566763, 0.521387, -0.345213, -1.281349, 2.026043, -0.134087,
    -0.266544, -0.635236, -0.895567, 0.412856,
];
pub const FX_Z: [f64; 40] = [
    -0.136977, -1.386224, 0.015074, 0.122565, -0.23978, -0.414031,
    -2.826639, -0.261939, -2.030512, -0.190831, -1.701941, -0.757513,
    -0.237467, 0.028115, 0.518927, -0.428038, 0.879118, -0.107268,
    0.048437, 0.197214, 0.071738, -0.921021, -0.300677, -1.83738,
    0.766679, -0.050697, -0.034774, -0.148665, -0.429653, 0.648086,
    -0.096629, 1.000834, -1.923782, -1.840347, 0.050933, 0.149867,
    0.425909, -0.103094, -0.074602, 0.00901,
];
pub const FX_QUANT_25: f64 = -0.753102;
pub const FX_QCOV_25: f64 = 0.097509031875;
pub const FX_QCOR_25: f64 = 0.3056749472112011;
pub const FX_QPCOR_25: f64 = -0.161344578959977;
pub const FX_QUANT_50: f64 = -0.083511;
pub const FX_QCOV_50: f64 = 0.12179215062500001;
pub const FX_QCOR_50: f64 = 0.33064726324494564;
pub const FX_QPCOR_50: f64 = 0.10904371413916995;
pub const FX_OMEGA1_25_HS: f64 = 1.2767578691422208;
pub const FX_OMEGA1_25_B: f64 = 1.2686576374859795;
pub const FX_OMEGA2_25_HS: f64 = 1.1938036171261401;
pub const FX_OMEGA2_50_06B: f64 = 1.1893169157728363;

// AR(1) series fixture: intercept 0.1, slope 0.5, n=60.
pub const AR_Y: [f64; 60] = [
    -0.473139, 0.440477, 1.844676, 0.708742, -0.147205, 0.21783,
    0.206886, -0.790173, 0.165833, 2.198432, 0.941104, 0.367676,
    -0.761094, 0.038541, -1.127706, -1.570784, 0.594275, -0.508315,
    0.9272, 2.087958, 1.403305, 1.355044, 2.729773, 1.268158,
    0.141073, -1.182694, -0.44964, 1.354324, 1.736757, 0.026287,
    -0.742232, -0.775287, 0.004625, -0.102999, 0.262954, 0.528217,
    0.065335, 0.092493, 0.352839, 0.19245, 0.699746, 2.320749,
    1.852347, 1.081984, -1.045127, -0.034606, -1.863982, -2.241025,
    -0.165873, 0.723298, 0.31171, -1.454156, -0.998427, -1.077952,
    0.197865, 2.456663, 1.545262, 0.09332, -1.023892, -0.46804,
];
pub const AR_QPACF_25_HS: [f64; 3] = [
    0.26917030499131783, -0.12034903336003815, -0.11558007299022865,
];
pub const AR_QPACF_OMEGA_25_HS: [f64; 3] = [
    1.0255146948507128, 1.0640712447316578, 0.9802231645831258,
];
pub const AR_FIT_COEF_25: [f64; 2] = [
    -0.540973473417057, 0.537824524560076,
];
pub const AR_FIT_COV_25: [f64; 4] = [
    0.03862645137704372, -0.01442252353454528, -0.01442252353454528, 0.023576481721791016,
];
pub const AR_FIT_RESID_HEAD: [f64; 8] = [
    0.0, 1.2359162311428868, 2.1487501403124085, 0.2576034807496742, 0.01258964423129963, 0.837973932554923,
    0.6307051572321357, -0.36046789117107886,
];
pub const AR_RACF_25: [f64; 3] = [
    0.12290287848475281, -0.08314107777135392, -0.23228279679008837,
];
pub const AR_RACF_OMEGA_DIAG_25: [f64; 3] = [
    0.3053198612636222, 0.7008801870402515, 1.0244544628167642,
];
pub const AR_BP_Q: f64 = 4.558371242246743;
pub const AR_BP_DF: f64 = 2.0;
pub const AR_BP_P: f64 = 0.10236753874021406;
pub const AR_SPARSITY_H: f64 = 0.17187992810079028;
pub const AR_SPARSITY_F_HEAD: [f64; 6] = [
    0.28648109538085004, 0.3228278899727662, 0.4010285464640295, 0.3353198244122967, 0.2984694886294245, 0.31314578321436626,
];
pub const AR_SPARSITY_NFLAGS: f64 = 0.0;
pub const AR_FIT2_COEF_50: [f64; 3] = [
    0.21662779038747615, 0.5653893789101173, -0.3049400255171051,
];
pub const AR_FIT2_COV_50: [f64; 9] = [
    0.04363630067807341, -0.00044524398984723327, -0.01902576580279122, -0.00044524398984723327, 0.034393606398490754, -0.017773854210631653,
    -0.01902576580279122, -0.017773854210631653, 0.03139308834313405,
];

// Subset-lag fixture series, n=80 (lags 1 and 3 active).
pub const SUB_Y: [f64; 80] = [
    -0.332158, 1.767601, 1.916164, 0.388456, 0.316916, -0.686755,
    -0.803371, 0.263576, 0.303115, 0.00033, 1.060795, -0.378351,
    -0.169499, 0.945592, 0.773236, 1.260542, 1.011581, 0.187381,
    0.733542, -0.529637, -1.751505, 0.238606, -0.115968, -0.164257,
    -1.68731, -0.900299, -0.911011, -1.559343, -2.947893, -1.446994,
    0.07337, -0.333964, -1.062884, -0.315399, 0.578689, -2.852532,
    -1.059146, 0.370129, 0.080034, 1.459954, 1.665564, 0.832241,
    0.916637, 1.478327, 0.112231, 0.222641, 1.342613, 2.388287,
    0.612879, 0.471116, 0.936887, 1.777489, 0.620713, 1.889795,
    0.044654, -0.017462, 0.269045, 0.878383, 1.30441, -1.05086,
    -1.01078, 0.359721, -0.813492, -2.019171, 0.522659, 0.447395,
    0.122603, -0.308, 1.048387, 0.105207, 1.050997, -0.334269,
    -0.928114, 0.188978, -0.729206, 0.224661, 0.37473, -0.992854,
    -0.168825, -0.308243,
];
pub const SUB_FIT_COEF: [f64; 3] = [
    0.05383424495504156, 0.3570824384802323, 0.14043840243398803,
];
pub const SUB_FIT_COV: [f64; 9] = [
    0.01818439992340013, 0.0004561310639096183, -0.007501631383210532, 0.0004561310639096183, 0.01521018453169227, -0.0037929964292595228,
    -0.007501631383210532, -0.0037929964292595228, 0.01699949549632607,
];
pub const SUB_RACF: [f64; 5] = [
    0.05882265871533354, -0.0621327738979604, 0.050072493669606456, 0.02746618312313326, -0.07116870258104675,
];
pub const SUB_BP_Q: f64 = 1.2517773468249147;
pub const SUB_BP_DF: f64 = 3.0;
pub const SUB_BP_P: f64 = 0.7406145971160183;

// QR solver fixture: n=12, d=2, general position.
pub const QR_X1: [f64; 12] = [
    0.915833, -0.632553, -0.439173, 1.211237, 2.238593, 1.999009,
    0.063223, 0.218855, 1.533459, -0.124435, -0.976349, 0.116876,
];
pub const QR_Y: [f64; 12] = [
    0.451517, -0.82915, -1.646231, -1.43673, 0.665429, -0.758377,
    -0.141347, 0.212559, 0.619141, -0.334903, 0.498716, -0.89006,
];
pub const QR_BETA_30: [f64; 2] = [
    -0.812138174525624, 0.02689391319680102,
];
pub const QR_OBJ_30: f64 = 3.3579660433873495;
pub const QR_BETA_50: [f64; 2] = [
    -0.28222638659550375, 0.4233263423031805,
];
pub const QR_OBJ_50: f64 = 3.706477959264977;
pub const QR_BETA_75: [f64; 2] = [
    0.30341177403610625, 0.161716411140343,
];
pub const QR_OBJ_75: f64 = 2.4761450164156766;

// QR tie fixture: n=16, d=3, duplicated responses (objective-only check).
pub const QRT_X1: [f64; 16] = [
    -0.36, 1.13, -0.74, -0.22, -1.6, -0.38,
    0.96, 0.71, -0.23, 1.21, 0.67, 1.92,
    0.57, -2.03, -0.19, 0.68,
];
pub const QRT_X2: [f64; 16] = [
    -1.02, -0.03, -0.35, 0.7, -1.04, 2.53,
    -0.11, 2.06, -0.37, 0.49, -0.51, 1.71,
    0.68, 0.64, 0.43, -0.34,
];
pub const QRT_Y: [f64; 16] = [
    -1.7, 0.4, -0.7, -0.3, -0.6, -0.3,
    -2.3, 1.2, 0.3, 1.1, 2.0, 0.0,
    -1.8, -0.9, -1.2, -0.5,
];
pub const QRT_OBJ_25: f64 = 5.088676148796498;
pub const QRT_OBJ_60: f64 = 6.017004196159878;

// Special-function spot values (x, df, expected sf).
pub const CHI_X: [f64; 7] = [
    0.5, 2.3, 7.9, 31.4, 0.004, 120.0,
    5.0,
];
pub const CHI_DF: [f64; 7] = [
    1.0, 2.0, 5.0, 6.0, 3.0, 4.0,
    12.0,
];
pub const CHI_SF: [f64; 7] = [
    0.47950012218695337, 0.3166367693790532, 0.16183361839504742, 2.1258568683143845e-05, 0.9999327971486784, 5.341471565244885e-25,
    0.9579789618046939,
];
pub const PPF_P: [f64; 8] = [
    1e-06, 0.0013, 0.02425, 0.25, 0.5, 0.846,
    0.975, 0.9999999,
];
pub const PPF_Z: [f64; 8] = [
    -4.753424308822899, -3.0114537584997843, -1.972961051311885, -0.6744897501960817, 0.0, 1.0194276182343704,
    1.959963984540054, 5.199337582290661,
];
pub const CDF_X: [f64; 6] = [
    -4.3, -1.959963984540054, 0.0, 0.77, 2.1, 6.0,
];
pub const CDF_P: [f64; 6] = [
    8.539905470991794e-06, 0.025, 0.5, 0.7793500536573503, 0.9821355794371834, 0.9999999990134123,
];
pub const LGAMMA_X: [f64; 6] = [
    0.5, 1.0, 2.0, 3.7, 11.25, 40.0,
];
pub const LGAMMA_V: [f64; 6] = [
    0.5723649429247, 0.0, 0.0, 1.428072326665388, 15.695301377060463, 106.63176026064345,
];

// Bandwidth rule spot values.
pub const BW_N: [f64; 7] = [
    100.0, 200.0, 100.0, 200.0, 100.0, 200.0,
    50.0,
];
pub const BW_TAU: [f64; 7] = [
    0.5, 0.25, 0.5, 0.25, 0.5, 0.75,
    0.05,
];
pub const BW_H: [f64; 7] = [
    0.20931604694700326, 0.11506208732842325, 0.257852030339281, 0.1444548818318991, 0.6279481408410098, 0.08667292909913947,
    0.0576104282848585,
];
// rule order: hs, hs, b, b, 3hs, 0.6b, hs

// Nadaraya-Watson fixture: scalar conditioning, 2-col rows, x0=0.2, h=0.7.
pub const NW_COND: [f64; 9] = [
    0.079648, -2.002187, 0.342475, -1.510357, 0.297365, -0.109491,
    -0.313631, -0.073043, -0.539778,
];
pub const NW_ROWS: [f64; 18] = [
    -0.612471, -1.682756, -0.029627, 1.845534, 1.980495, 1.321818,
    0.705802, -0.67648, 1.442751, -0.056128, -0.068876, -0.291227,
    0.091962, -0.435215, -0.083782, -1.084599, -0.373664, 2.280556,
];
pub const NW_OUT: [f64; 2] = [
    0.4071306450489759, -0.11921982136014642,
];

// Closed-form MC target values.
pub const TRUE_QCOR_25: f64 = 0.36693677956265164;
pub const TRUE_QPCOR_25: f64 = 0.24462451970843443;
pub const TRUE_QCOR_50: f64 = 0.3989422804014327;
pub const TRUE_QPCOR_50: f64 = 0.2659615202676218;
pub const TRUE_QCOR_75: f64 = 0.36693677956265164;
pub const TRUE_QPCOR_75: f64 = 0.24462451970843443;
