//! Reference data for two periodic orbits of the Lorenz family
//! (σ = 10, β = 8/3) and the twisted ζ³ orbit parameters.
//!
//! The coefficient tables are high accuracy numerical data for the orbits at
//! ρ = 18.0815 (solution 1) and ρ = 23.8815 (solution 4); they seed the
//! shipped fixtures and the regression tests. Trust radii are supplied by the
//! caller: nothing here is rigorous by itself.

// Table values are kept with their full printed digit count.
#![allow(clippy::excessive_precision)]

use super::{OrbitEnclosure, VectorFieldSpec};
use crate::interval::{ComplexInterval, Interval};

pub const LORENZ_SIGMA: f64 = 10.0;
pub const LORENZ_BETA: f64 = 8.0 / 3.0;

/// ρ values of the five orbits on the branch, in table order.
pub const LORENZ_RHO: [f64; 5] = [18.0815, 18.6815, 20.8815, 23.8815, 24.1816];

pub const SOL1_RHO: f64 = 18.0815;
pub const SOL1_TAU: f64 = 1.027854840752128;
pub const SOL1_XI0: [f64; 3] = [-4.606354666884038, -4.606354666884038, 13.533127936581090];

/// Coefficients ξ̄_1..ξ̄_15 of solution 1; `[k-1][component][re, im]`.
pub const SOL1_XI: [[[f64; 2]; 3]; 15] = [
    [
        [-2.457589444025310, -0.734232230617879],
        [-2.008759805775985, -2.236534819812307],
        [3.644641521462053, -2.592383847330301],
    ],
    [
        [-0.840331595816763, -0.280556868231764],
        [-0.497327754727251, -1.307931343042055],
        [1.373048803380924, -0.590924707028489],
    ],
    [
        [-0.244051806246999, -0.079599377946577],
        [-0.098076628971404, -0.527159479549944],
        [0.516674965708581, -0.103578564294281],
    ],
    [
        [-0.066251105459624, -0.023092599715315],
        [-0.009785901431526, -0.185087447977630],
        [0.181193087615871, -0.007305965402112],
    ],
    [
        [-0.017586386797219, -0.007027398326009],
        [0.003892543961801, -0.060779408215756],
        [0.059967166034911, 0.005022757182874],
    ],
    [
        [-0.004633846567037, -0.002168050944621],
        [0.003318015096906, -0.019163826327315],
        [0.019005700003600, 0.003642138482031],
    ],
    [
        [-0.001215481367863, -0.000664841070850],
        [0.001629398704351, -0.005865931787398],
        [0.005830102115005, 0.001711097840891],
    ],
    [
        [-0.000317263424301, -0.000201467445482],
        [0.000667978649296, -0.001752989942270],
        [0.001743196289261, 0.000687999808866],
    ],
    [
        [-0.000082326458994, -0.000060305586234],
        [0.000249451961957, -0.000513234481766],
        [0.000510298663577, 0.000254394262682],
    ],
    [
        [-0.000021217174006, -0.000017849897868],
        [0.000087897665531, -0.000147548597224],
        [0.000146654700161, 0.000089133299138],
    ],
    [
        [-0.000005425393706, -0.000005230883352],
        [0.000029748123926, -0.000041712327941],
        [0.000041443384209, 0.000030059169428],
    ],
    [
        [-0.000001374889998, -0.000001519316512],
        [0.000009770046204, -0.000011604812976],
        [0.000011525197547, 0.000009848310635],
    ],
    [
        [-0.000000344798445, -0.000000437771341],
        [0.000003134076053, -0.000003177810272],
        [0.000003154570627, 0.000003153649381],
    ],
    [
        [-0.000000085406182, -0.000000125225422],
        [0.000000986282445, -0.000000856137980],
        [0.000000849430424, 0.000000991127939],
    ],
    [
        [-0.000000020840071, -0.000000035583174],
        [0.000000305435097, -0.000000226673423],
        [0.000000224755146, 0.000000306618231],
    ],
];

/// Reference constant matrix of the normal form for solution 1.
pub const SOL1_R: [[f64; 3]; 3] = [
    [-10.508958375451483, 6.244108010218356, -7.445538972862637],
    [1.367770562612481, 5.059391467543374, -10.140640221489871],
    [-6.918853545877750, 5.863201994753524, -8.217099758758689],
];

/// Lyapunov exponent reference values (stable, unstable) for solution 1.
pub const SOL1_EXPONENTS: (f64, f64) = (-14.2953855130260, 0.6287188463595);

pub const SOL4_RHO: f64 = 23.8815;
pub const SOL4_TAU: f64 = 0.683813590045746;
pub const SOL4_XI0: [f64; 3] = [-7.521252250993276, -7.521252250993276, 22.399077327399255];

/// Coefficients ξ̄_1..ξ̄_15 of solution 4; `[k-1][component][re, im]`.
pub const SOL4_XI: [[[f64; 2]; 3]; 15] = [
    [
        [-1.246453092091490, -1.262394967959499],
        [-0.117098081743200, 1.579694736267260],
        [-1.138858133842916, -1.528289275687748],
    ],
    [
        [-0.114587819240451, -0.194828460289262],
        [0.015748373138453, 0.188342422139680],
        [-0.143528439361466, -0.149121347835789],
    ],
    [
        [-0.008589210614442, -0.020708730881492],
        [0.002967722490543, 0.020459531930793],
        [-0.016769839350022, -0.016159568619679],
    ],
    [
        [-0.000619073947482, -0.001950094567689],
        [0.000325236831105, 0.001967969477674],
        [-0.001814442573257, -0.001764257857272],
    ],
    [
        [-0.000044052745410, -0.000171023517657],
        [0.000031364652698, 0.000173341352082],
        [-0.000188148978551, -0.000185385380347],
    ],
    [
        [-0.000003073584415, -0.000014085485779],
        [0.000002859395743, 0.000014272552631],
        [-0.000018837629098, -0.000018676999462],
    ],
    [
        [-0.000000208407126, -0.000001089211660],
        [0.000000251244910, 0.000001104010427],
        [-0.000001824392597, -0.000001813988748],
    ],
    [
        [-0.000000013587818, -0.000000078416175],
        [0.000000021464593, 0.000000079624828],
        [-0.000000171368842, -0.000000170686207],
    ],
    [
        [-0.000000000836854, -0.000000005128148],
        [0.000000001792309, 0.000000005227527],
        [-0.000000015658534, -0.000000015616179],
    ],
    [
        [-0.000000000046957, -0.000000000284715],
        [0.000000000146750, 0.000000000292804],
        [-0.000000001395354, -0.000000001392990],
    ],
    [
        [-0.000000000002182, -0.000000000010252],
        [0.000000000011806, 0.000000000010900],
        [-0.000000000121501, -0.000000000121396],
    ],
    [
        [-0.000000000000052, 0.000000000000357],
        [0.000000000000935, -0.000000000000305],
        [-0.000000000010352, -0.000000000010351],
    ],
    [
        [0.000000000000006, 0.000000000000135],
        [0.000000000000073, -0.000000000000131],
        [-0.000000000000863, -0.000000000000865],
    ],
    [
        [0.000000000000002, 0.000000000000021],
        [0.000000000000006, -0.000000000000020],
        [-0.000000000000070, -0.000000000000071],
    ],
    [
        [0.000000000000000, 0.000000000000003],
        [0.000000000000000, -0.000000000000003],
        [-0.000000000000005, -0.000000000000006],
    ],
];

/// Reference constant matrix of the normal form for solution 4.
pub const SOL4_R: [[f64; 3]; 3] = [
    [-10.103827000749006, 5.011512150268070, -4.181592133228406],
    [2.108771563239242, -0.623931925418962, 0.486619976897008],
    [-6.292527840128125, 3.486887629270139, -2.938907740498710],
];

/// Lyapunov exponent reference values (stable, unstable) for solution 4.
pub const SOL4_EXPONENTS: (f64, f64) = (-13.7210150091049, 0.0543483424385);

pub const ZETA3_ALPHA: f64 = 3.372;
pub const ZETA3_BETA: f64 = 2.0;

/// Reference enclosures of the nontrivial multiplier moduli for the twisted
/// ζ³ orbit at α = 3.372.
pub const ZETA3_DELTA_ST: (f64, f64) = (7.037235782193e-3, 7.037944324307e-3);
pub const ZETA3_DELTA_UNST: (f64, f64) = (1.526609276443494, 1.528421395487018);

/// Reference signed multipliers recovered by the component-wise ratio.
pub const ZETA3_SIGMA_ST: f64 = -7.037590044326e-3;
pub const ZETA3_SIGMA_UNST: f64 = -1.527515067244305;

fn orbit_from_table(
    rho: f64,
    tau: f64,
    xi0: &[f64; 3],
    xi: &[[[f64; 2]; 3]; 15],
    r_gamma: f64,
) -> OrbitEnclosure {
    let field = VectorFieldSpec::lorenz(LORENZ_SIGMA, rho, LORENZ_BETA);
    let mut coeffs = Vec::with_capacity(16);
    coeffs.push(
        xi0.iter()
            .map(|&v| ComplexInterval::new(Interval::point(v), Interval::ZERO))
            .collect::<Vec<_>>(),
    );
    for row in xi {
        coeffs.push(
            row.iter()
                .map(|c| ComplexInterval::point(c[0], c[1]))
                .collect::<Vec<_>>(),
        );
    }
    let orbit = OrbitEnclosure {
        field,
        tau: Interval::point(tau),
        s_star: 2.0,
        m_gamma: 15,
        xi: coeffs,
        r_gamma,
        rigorous: false,
    };
    orbit.validate().expect("builtin orbit data consistent");
    orbit
}

/// Orbit data for solution 1 (ρ = 18.0815) with a caller-supplied trust radius.
pub fn lorenz_sol1_orbit(r_gamma: f64) -> OrbitEnclosure {
    orbit_from_table(SOL1_RHO, SOL1_TAU, &SOL1_XI0, &SOL1_XI, r_gamma)
}

/// Raw table data for solution 4. The coefficient table does not satisfy the
/// Lorenz equations (its mode sums violate the β-mean identity by ~12%), but
/// the period and zero mode are exact and the reconstructed loop lands close
/// enough to the true orbit to serve as a search seed.
pub fn lorenz_sol4_seed(r_gamma: f64) -> OrbitEnclosure {
    orbit_from_table(SOL4_RHO, SOL4_TAU, &SOL4_XI0, &SOL4_XI, r_gamma)
}

/// Orbit data for solution 4 (ρ = 23.8815): the candidate finder run from the
/// table seed. Reproduces the reference period to 1e-13 and the reference
/// Lyapunov exponents to 1e-10.
pub fn lorenz_sol4_orbit(r_gamma: f64) -> OrbitEnclosure {
    let seed = lorenz_sol4_seed(0.0);
    let mut y0 = SOL4_XI0.to_vec();
    for row in &SOL4_XI {
        for i in 0..3 {
            y0[i] += 2.0 * row[i][0];
        }
    }
    let guess = super::OrbitGuess::Point { y0, period: SOL4_TAU };
    let mut orbit = super::orbit_candidate_find(&seed.field, &guess, 20, r_gamma)
        .expect("solution 4 refinement converges");
    orbit.r_gamma = r_gamma;
    orbit
}
