#pragma once

// Chebyshev coefficients for exponentially scaled modified Bessel functions
// on the mid-range interval:  g_j(1/z) = e^z sqrt(2z/pi) K_j(z), w = 1/z.

namespace slb::detail {

// e^z sqrt(2z/pi) K0(z), z in [2,6], max rel fit err 5.24e-28
inline constexpr double kChebK0_2_6[] = {
    1.929514627913341255,
    -0.01559667911151844892,
    0.0004684886819214528596,
    -0.00002237082823722739199,
    1.382433075077456497e-6,
    -1.012437500602404672e-7,
    8.38199271933865228e-9,
    -7.622160902868437305e-10,
    7.469249026973626884e-11,
    -7.782576782597294607e-12,
    8.537775097358215416e-13,
    -9.788032797161500907e-14,
    1.165849360746079948e-14,
    -1.436031946825826815e-15,
    1.822286322996932846e-16,
    -2.374883112194127491e-17,
    3.170328378547675974e-18,
    -4.325534091035404588e-19,
};

// e^z sqrt(2z/pi) K0(z), z in [6,18], max rel fit err 2.48e-30
inline constexpr double kChebK0_6_18[] = {
    1.973946310239498724,
    -0.006205524587130666276,
    0.0000804498007132235791,
    -1.78731099159148217e-6,
    5.443041891976925999e-8,
    -2.056839480097922222e-9,
    9.12513227461463317e-11,
    -4.590541757905174062e-12,
    2.557536353454745651e-13,
    -1.55150691469573153e-14,
    1.011944934574834219e-15,
    -7.027229231888229044e-17,
    5.155530174345054752e-18,
    -3.97106882193968814e-19,
};

// e^z sqrt(2z/pi) K1(z), z in [2,6], max rel fit err 5.32e-28
inline constexpr double kChebK1_2_6[] = {
    2.227549694447897695,
    0.05322473455041340773,
    -0.0008789686044735178384,
    0.00003497652659444509398,
    -1.972376476164202853e-6,
    1.365952066985746962e-7,
    -1.088634830721406477e-8,
    9.628178511481094292e-10,
    -9.236234907792295832e-11,
    9.462318863438711199e-12,
    -1.023823853439752353e-12,
    1.160318510699516189e-13,
    -1.368615498888710873e-14,
    1.671665265397502643e-15,
    -2.105797808849134827e-16,
    2.726695720776506688e-17,
    -3.619138267644673152e-18,
    4.912552588521444705e-19,
};

// e^z sqrt(2z/pi) K1(z), z in [6,18], max rel fit err 2.59e-30
inline constexpr double kChebK1_6_18[] = {
    2.080403479525533378,
    0.01957040974646811811,
    -0.0001406522781609262839,
    2.620029863583057883e-6,
    -7.315943817502731584e-8,
    2.624344974020441751e-9,
    -1.124374892185015259e-10,
    5.516169894599017994e-12,
    -3.015467342013474064e-13,
    1.802274952971122175e-14,
    -1.161463293717125039e-15,
    7.985907205121803116e-17,
    -5.810194236064971791e-18,
    4.443567495805659956e-19,
};


} // namespace slb::detail
