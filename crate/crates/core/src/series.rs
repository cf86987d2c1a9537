//! Exp-polynomials in tau, evaluated without cancellation.
//!
//! Many closed-form coefficients are combinations such as
//! `2 tau + 4 e^-tau - e^-2tau - 3` whose leading Taylor terms cancel
//! exactly. Near tau = 0 the direct formula keeps no correct digits, so each
//! combination is summed from its Taylor series, whose coefficients are
//! computed exactly in integer arithmetic and rounded once.

/// One term `coef * tau^t_pow * exp(-e_rate * tau)`.
#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub coef: i64,
    pub t_pow: u32,
    pub e_rate: u32,
}

const fn term(coef: i64, t_pow: u32, e_rate: u32) -> Term {
    Term {
        coef,
        t_pow,
        e_rate,
    }
}

/// Number of Taylor coefficients kept. Plenty for tau below [`SERIES_BELOW`].
const N_COEF: usize = 48;

/// Below this tau the series is used.
pub const SERIES_BELOW: f64 = 0.5;

/// A finite sum of [`Term`]s vanishing to a known order at tau = 0.
#[derive(Debug, Clone)]
pub struct ExpPoly {
    terms: &'static [Term],
    order: u32,
    coef: [f64; N_COEF],
}

impl ExpPoly {
    /// Builds the polynomial and checks that its Taylor series starts at
    /// `tau^order`.
    pub fn new(terms: &'static [Term], order: u32) -> Self {
        let mut coef = [0.0; N_COEF];
        let mut fact = 1.0f64;
        for (n, c) in coef.iter_mut().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            // n! * [tau^n] = sum coef * (-r)^(n-k) * n!/(n-k)!
            let mut num: i128 = 0;
            for t in terms {
                let k = t.t_pow as usize;
                if k > n {
                    continue;
                }
                let mut falling: i128 = 1;
                for j in 0..k {
                    falling *= (n - j) as i128;
                }
                let r = -(t.e_rate as i128);
                num += t.coef as i128 * r.pow((n - k) as u32) * falling;
            }
            assert!(
                n >= order as usize || num == 0,
                "exp-polynomial does not vanish to order {order}"
            );
            *c = num as f64 / fact;
        }
        ExpPoly { terms, order, coef }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Leading Taylor coefficient.
    pub fn leading(&self) -> f64 {
        self.coef[self.order as usize]
    }

    fn direct(&self, tau: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef as f64 * tau.powi(t.t_pow as i32) * (-(t.e_rate as f64) * tau).exp())
            .sum()
    }

    /// value / tau^order, finite at tau = 0.
    pub fn scaled(&self, tau: f64) -> f64 {
        if tau < SERIES_BELOW {
            let mut acc = 0.0;
            for &c in self.coef[self.order as usize..].iter().rev() {
                acc = acc * tau + c;
            }
            acc
        } else {
            self.direct(tau) / tau.powi(self.order as i32)
        }
    }

    pub fn eval(&self, tau: f64) -> f64 {
        if tau < SERIES_BELOW {
            self.scaled(tau) * tau.powi(self.order as i32)
        } else {
            self.direct(tau)
        }
    }
}

/// 1 - e^-tau
pub static ONE_MINUS_E: [Term; 2] = [term(1, 0, 0), term(-1, 0, 1)];
/// 1 - e^-2tau
pub static ONE_MINUS_E2: [Term; 2] = [term(1, 0, 0), term(-1, 0, 2)];
/// tau + e^-tau - 1
pub static ZC: [Term; 3] = [term(1, 1, 0), term(1, 0, 1), term(-1, 0, 0)];
/// 2 tau + 4 e^-tau - e^-2tau - 3
pub static SZ: [Term; 4] = [term(2, 1, 0), term(4, 0, 1), term(-1, 0, 2), term(-3, 0, 0)];
/// (e^-tau + 1) tau - 2 (1 - e^-tau)
pub static G1: [Term; 4] = [term(1, 1, 1), term(1, 1, 0), term(-2, 0, 0), term(2, 0, 1)];
/// e^-2tau (2 tau + 3) - 4 e^-tau + 1
pub static G2: [Term; 4] = [term(2, 1, 2), term(3, 0, 2), term(-4, 0, 1), term(1, 0, 0)];
/// -2 (2 tau^3 - 6 tau^2 + 6 tau + 3) + 6 e^-2tau + 24 tau e^-tau
pub static K1: [Term; 6] = [
    term(-4, 3, 0),
    term(12, 2, 0),
    term(-12, 1, 0),
    term(-6, 0, 0),
    term(6, 0, 2),
    term(24, 1, 1),
];
/// 1 - 2 tau e^-tau - e^-2tau
pub static K2: [Term; 3] = [term(1, 0, 0), term(-2, 1, 1), term(-1, 0, 2)];

/// The scaled exp-polynomials needed by the closed forms at one tau.
///
/// Each `phi_*` is the named combination divided by its leading power of
/// tau, so it is O(1) as tau -> 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauFunctions {
    pub tau: f64,
    pub e1: f64,
    pub e2: f64,
    /// (1 - e^-tau)/tau
    pub phi_a: f64,
    /// (1 - e^-2tau)/(2 tau)
    pub phi_b: f64,
    /// ZC/tau^2
    pub phi_zc: f64,
    /// SZ/tau^3
    pub phi_sz: f64,
    /// G1/tau^3
    pub phi_g1: f64,
    /// G2/tau^3
    pub phi_g2: f64,
    /// K1/tau^5
    pub phi_k1: f64,
    /// K2/tau^3
    pub phi_k2: f64,
}

struct Table {
    a: ExpPoly,
    b: ExpPoly,
    zc: ExpPoly,
    sz: ExpPoly,
    g1: ExpPoly,
    g2: ExpPoly,
    k1: ExpPoly,
    k2: ExpPoly,
}

fn table() -> &'static Table {
    static T: std::sync::OnceLock<Table> = std::sync::OnceLock::new();
    T.get_or_init(|| Table {
        a: ExpPoly::new(&ONE_MINUS_E, 1),
        b: ExpPoly::new(&ONE_MINUS_E2, 1),
        zc: ExpPoly::new(&ZC, 2),
        sz: ExpPoly::new(&SZ, 3),
        g1: ExpPoly::new(&G1, 3),
        g2: ExpPoly::new(&G2, 3),
        k1: ExpPoly::new(&K1, 5),
        k2: ExpPoly::new(&K2, 3),
    })
}

impl TauFunctions {
    pub fn new(tau: f64) -> Self {
        let t = table();
        TauFunctions {
            tau,
            e1: (-tau).exp(),
            e2: (-2.0 * tau).exp(),
            phi_a: t.a.scaled(tau),
            phi_b: t.b.scaled(tau) / 2.0,
            phi_zc: t.zc.scaled(tau),
            phi_sz: t.sz.scaled(tau),
            phi_g1: t.g1.scaled(tau),
            phi_g2: t.g2.scaled(tau),
            phi_k1: t.k1.scaled(tau),
            phi_k2: t.k2.scaled(tau),
        }
    }
}
