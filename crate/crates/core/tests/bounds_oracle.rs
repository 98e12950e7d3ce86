//! Bound values checked against 50-digit reference evaluations produced by
//! `tests/oracle/bounds_oracle.py` (direct formulas, no cancellation guards).

use zenolab::bounds::{
    beta, bound_exact, bound_first_order, bound_strong, coefficient_pair, evaluate, gamma_pair,
    BoundInputs,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn intermediates_match_reference() {
    let inputs = BoundInputs {
        j0: 1.0,
        j1: 0.1,
        tau: 1.0,
        m: 10,
        q_cap: 3,
        q_small: 2,
        zeta: 0.5,
    };
    let b = beta(&inputs).unwrap();
    assert!(rel(b, 0.105337808610063226058601368313) < 1e-14);
    let (gp, gm) = gamma_pair(b, 0.5, 2, 3).unwrap();
    assert!(rel(gp, 1.11591340170653280363484352628) < 1e-14);
    assert!(rel(gm, 0.318427763361077841967708868271) < 1e-14);
    let (ap, am) = coefficient_pair(b, 0.5, 2, 3).unwrap();
    assert!(rel(ap, 1.21166366291732168348887706526) < 1e-14);
    assert!(rel(am, -0.0273224978497110378863246707105) < 1e-13);

    let r = evaluate(&inputs).unwrap();
    assert_eq!(r.beta, b);
    assert_eq!(r.a_plus, Some(ap));
}

struct Case {
    j0: f64,
    j1: f64,
    tau: f64,
    m: usize,
    q_cap: usize,
    q: usize,
    zeta: f64,
    exact: f64,
    first: f64,
    strong: f64,
}

const CASES: &[Case] = &[
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 20, q_cap: 15, q: 8, zeta: 0.5,
        exact: 0.025687855211973866932016380826, first: 0.0261834499653040386641321807902,
        strong: 0.0104550084985422214665258968976 },
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 20, q_cap: 15, q: 1, zeta: 0.5,
        exact: 20.4392859673878097750594079657, first: 4.08761629954528927267303228505,
        strong: 0.0104550084985422214665258968976 },
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 1, q_cap: 15, q: 8, zeta: 0.5,
        exact: 0.470131870321140722907420576453, first: 0.523668999306080773282643615805,
        strong: 0.349001960794562164331717178973 },
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 4096, q_cap: 15, q: 8, zeta: 0.5,
        exact: 0.000127836602776962991359624770629, first: 0.000127848876783711126289707914015,
        strong: 0.0000497793538217983239905771587836 },
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 4096, q_cap: 15, q: 1, zeta: 0.5,
        exact: 0.0200747628307949457752123797417, first: 0.0199590639626234827767237904543,
        strong: 0.0000497793538217983239905771587836 },
    Case { j0: 1.0, j1: 1.0, tau: 1.0, m: 60, q_cap: 15, q: 1, zeta: 0.5,
        exact: 3.66467778770311098034326774379, first: 1.6989261427869032721001796696,
        strong: 0.393551735554117476950558672123 },
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 7, q_cap: 15, q: 8, zeta: 0.95,
        exact: 556.168007497236313648741065372, first: 22.9916043571247634175564129344,
        strong: 0.0313288824545918860275052585657 },
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 32, q_cap: 3, q: 2, zeta: 0.0,
        exact: 0.00127714701030682160585682112349, first: 0.0012741946070901774540751347522,
        strong: 0.00127714701030682160585682112349 },
    Case { j0: 2.0, j1: 0.3, tau: 0.5, m: 5, q_cap: 3, q: 2, zeta: 0.3,
        exact: 0.28563713467240478551599126409, first: 0.340957674291084143711111662306,
        strong: 0.0187768382466069799462818086244 },
    Case { j0: 1.0, j1: 0.1, tau: 1.0, m: 3, q_cap: 3, q: 1, zeta: 0.999,
        exact: 14.6638800785976190449724143341, first: 5431.1406846703146754760311692,
        strong: 0.0139261347651077641264139641188 },
];

#[test]
fn bounds_match_reference() {
    for c in CASES {
        let inputs = BoundInputs {
            j0: c.j0,
            j1: c.j1,
            tau: c.tau,
            m: c.m,
            q_cap: c.q_cap,
            q_small: c.q,
            zeta: c.zeta,
        };
        let exact = bound_exact(&inputs).unwrap();
        let first = bound_first_order(&inputs).unwrap();
        let strong = bound_strong(&inputs).unwrap();
        // The ζ = 0.999 point loses digits to 1/(1 − ζ) amplification.
        let tol = if c.zeta > 0.99 { 1e-11 } else { 1e-12 };
        assert!(rel(exact, c.exact) < tol, "exact M={} q={}: {exact} vs {}", c.m, c.q, c.exact);
        assert!(rel(first, c.first) < tol, "first M={} q={}: {first} vs {}", c.m, c.q, c.first);
        assert!(rel(strong, c.strong) < 1e-12, "strong M={}: {strong} vs {}", c.m, c.strong);
    }
}

#[test]
fn generator_bound_is_never_tighter_than_group() {
    for m in [1, 2, 5, 20, 100] {
        for zeta in [0.0, 0.2, 0.5, 0.9] {
            let g = bound_exact(&BoundInputs::generators(1.0, 0.1, 1.0, m, 4, zeta)).unwrap();
            let s = bound_exact(&BoundInputs::group(1.0, 0.1, 1.0, m, 4, zeta)).unwrap();
            assert!(g >= s - 1e-12, "M={m} zeta={zeta}: {g} < {s}");
        }
    }
}
