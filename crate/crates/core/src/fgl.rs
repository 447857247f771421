//! Structure constants of the universal example: the action `phi_k`, the
//! braiding coefficients `Ups[p,q]`, the formal group law coefficients
//! `a[i,j]`, the formal inverse and the polynomial generators `X_n`.
//!
//! An [`Engine`] caches every table for one weight bound and convention.
//! `order` bounds coefficient weights throughout this module: `Ups[p,q]` needs
//! `p + q <= order`, `a[i,j]` needs `i + j <= order + 1`, and `phi_k(a)` needs
//! `k + weight(a) <= order`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::freealg::{FreePoly, PolyAcc};
use crate::hur::{
    orientation_series, power_coefficients, BraidOrientation, CommutationRules, Convention, HurContext, XExpansion,
};
use crate::int::Int;
use crate::tlaurent::{ts_mul, ts_substitute_sum, Mono, TSeries};

/// `a[i,j]` for `i + j <= order + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FglTable {
    pub order: usize,
    pub a: BTreeMap<(usize, usize), FreePoly>,
}

impl FglTable {
    pub fn get(&self, i: usize, j: usize) -> Result<FreePoly> {
        if i + j > self.order + 1 {
            return Err(Error::PrecisionExhausted(format!("a[{i},{j}] needs order >= {}", i + j - 1)));
        }
        Ok(self.a.get(&(i, j)).cloned().unwrap_or_default())
    }
}

/// Braiding coefficients for `p + q <= order`, stored in the literal orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpsilonTable {
    pub order: usize,
    pub literal: BTreeMap<(usize, usize), FreePoly>,
}

impl UpsilonTable {
    pub fn get(&self, p: usize, q: usize, braid: BraidOrientation) -> Result<FreePoly> {
        if p + q > self.order {
            return Err(Error::PrecisionExhausted(format!("Ups[{p},{q}] needs order >= {}", p + q)));
        }
        let key = match braid {
            BraidOrientation::Literal => (p, q),
            BraidOrientation::Transposed => (q, p),
        };
        Ok(self.literal.get(&key).cloned().unwrap_or_default())
    }
}

pub struct Engine {
    order: usize,
    conv: Convention,
    powc: OnceLock<Vec<Vec<FreePoly>>>,
    ups: OnceLock<UpsilonTable>,
    fgl: OnceLock<FglTable>,
    inverse: OnceLock<Vec<FreePoly>>,
}

fn registry() -> &'static Mutex<HashMap<(usize, Convention), Arc<Engine>>> {
    static REG: OnceLock<Mutex<HashMap<(usize, Convention), Arc<Engine>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Engine {
    pub fn new(order: usize, conv: Convention) -> Engine {
        Engine {
            order,
            conv,
            powc: OnceLock::new(),
            ups: OnceLock::new(),
            fgl: OnceLock::new(),
            inverse: OnceLock::new(),
        }
    }

    /// A process-wide engine for `(order, conv)`, built on first use.
    pub fn shared(order: usize, conv: Convention) -> Arc<Engine> {
        registry()
            .lock()
            .expect("engine registry poisoned")
            .entry((order, conv))
            .or_insert_with(|| Arc::new(Engine::new(order, conv)))
            .clone()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn convention(&self) -> Convention {
        self.conv
    }

    /// `c[k][n]` = coefficient of `T^{1+n}` in `X(T)^{1+k}`.
    pub fn power_coefficients(&self) -> &Vec<Vec<FreePoly>> {
        self.powc.get_or_init(|| power_coefficients(self.order.max(1)))
    }

    /// `phi_0(a), ..., phi_kmax(a)` from the triangular recursion
    /// `phi_n(a) = Z_n a - sum_{k<n} phi_k(a) c[k][n]`.
    pub fn phi_all(&self, a: &FreePoly, kmax: usize) -> Result<Vec<FreePoly>> {
        let w = a.max_weight().unwrap_or(0);
        if kmax + w > self.order {
            return Err(Error::PrecisionExhausted(format!(
                "phi_{kmax} of an element of weight {w} needs order >= {}",
                kmax + w
            )));
        }
        let c = self.power_coefficients();
        let mut out: Vec<FreePoly> = vec![a.clone()];
        for n in 1..=kmax {
            let mut acc = PolyAcc::new();
            acc.add_product(&FreePoly::gen(n), a, &Int::ONE);
            for (k, pk) in out.iter().enumerate() {
                acc.add_product(pk, &c[k][n], &Int::from(-1));
            }
            out.push(acc.finish());
        }
        Ok(out)
    }

    pub fn phi(&self, k: usize, a: &FreePoly) -> Result<FreePoly> {
        if a.is_zero() {
            return Ok(FreePoly::zero());
        }
        Ok(self.phi_all(a, k)?.pop().expect("nonempty"))
    }

    /// `phi_{w[0]}(phi_{w[1]}(... phi_{w[n-1]}(a)))`.
    pub fn phi_word(&self, w: &[usize], a: &FreePoly) -> Result<FreePoly> {
        let mut acc = a.clone();
        for &k in w.iter().rev() {
            acc = self.phi(k, &acc)?;
        }
        Ok(acc)
    }

    pub fn upsilon_table(&self) -> &UpsilonTable {
        self.ups.get_or_init(|| {
            let order = self.order;
            let ctx = HurContext::new(2, order as i32 + 2);
            let yx = ts_mul(ctx.x(1), ctx.x(0));
            let e = ctx.extract_left(&yx).expect("braiding lies in the span");
            let mut literal = BTreeMap::new();
            for (m, c) in e.terms() {
                let (i, j) = (m.0[0] as usize, m.0[1] as usize);
                if i >= 1 && j >= 1 && i + j - 2 <= order {
                    literal.insert((i - 1, j - 1), c.clone());
                }
            }
            UpsilonTable { order, literal }
        })
    }

    /// `Ups[p,q]` named according to the engine's convention.
    pub fn upsilon(&self, p: usize, q: usize) -> Result<FreePoly> {
        self.upsilon_table().get(p, q, self.conv.braid)
    }

    pub fn fgl_table(&self) -> &FglTable {
        self.fgl.get_or_init(|| {
            let order = self.order;
            let t_order = order as i32 + 1;
            let ctx = HurContext::new(2, t_order);
            let sum = ts_substitute_sum(&orientation_series(1, 0, t_order), 2);
            let e = ctx.extract_left(&sum).expect("formal sum lies in the span");
            let a = e.terms().iter().map(|(m, c)| ((m.0[0] as usize, m.0[1] as usize), c.clone())).collect();
            FglTable { order, a }
        })
    }

    pub fn fgl_coeff(&self, i: usize, j: usize) -> Result<FreePoly> {
        self.fgl_table().get(i, j)
    }

    /// Left coefficients `iota[k]` of `[-1](x) = sum_k iota[k] x^k`, `k <= order + 1`,
    /// with `iota[0] = 0` and `iota[1] = -1`.
    pub fn formal_inverse(&self) -> &Vec<FreePoly> {
        self.inverse.get_or_init(|| formal_inverse_solve(self.fgl_table(), self.order as i32 + 1))
    }

    /// `X_n = sum_{k=1}^{n} lambda_k a[k, n+1-k]` with the Bezout coefficients
    /// of the binomials `C(n+1, k)`.
    pub fn generator_x(&self, n: usize) -> Result<FreePoly> {
        if n == 0 {
            return Err(Error::BadInput("generators start at X1".into()));
        }
        if n > self.order {
            return Err(Error::PrecisionExhausted(format!("X{n} needs order >= {n}")));
        }
        let (_, lambda) = bezout_lambdas(n + 1);
        let mut acc = PolyAcc::new();
        for (i, l) in lambda.iter().enumerate() {
            let k = i + 1;
            if !l.is_zero() {
                acc.add_scaled(&self.fgl_coeff(k, n + 1 - k)?, l);
            }
        }
        Ok(acc.finish())
    }
}

impl CommutationRules for Engine {
    fn upsilon_literal(&self, p: usize, q: usize) -> Result<FreePoly> {
        self.upsilon_table().get(p, q, BraidOrientation::Literal)
    }

    fn phi(&self, k: usize, a: &FreePoly) -> Result<FreePoly> {
        Engine::phi(self, k, a)
    }
}

/// Solves `sum a[i,j] X^i I^j = 0` for `I = sum_k iota[k] X^k` degree by degree
/// in the one-variable model.
fn formal_inverse_solve(table: &FglTable, t_order: i32) -> Vec<FreePoly> {
    let ctx = HurContext::new(1, t_order);
    let mut iota = vec![FreePoly::zero(), FreePoly::constant(Int::from(-1))];
    for d in 2..=t_order {
        let inv = ctx.realize(&XExpansion::from_terms(
            1,
            d,
            iota.iter().enumerate().map(|(k, c)| (Mono::from_slice(&[k as i32]), c.clone())),
        ));
        let mut inv_pows = vec![TSeries::one(1, d)];
        for j in 1..=d as usize {
            inv_pows.push(ts_mul(&inv_pows[j - 1], &inv));
        }
        let mut total = TSeries::zero(1, d);
        for ((i, j), a) in &table.a {
            if (i + j) as i32 > d {
                continue;
            }
            let term = ts_mul(&ctx.power(0, *i).truncate(d).lmul(a), &inv_pows[*j]);
            total = total.add(&term);
        }
        iota.push(-&total.coeff(&[d]));
    }
    iota
}

/// `g = gcd(C(n,1), ..., C(n,n-1))` and integers with `sum lambda_k C(n,k) = g`.
///
/// Iterated extended Euclid, smallest index first; a binomial already divisible
/// by the running gcd gets coefficient zero.
pub fn bezout_lambdas(n: usize) -> (Int, Vec<Int>) {
    assert!(n >= 2, "needs n >= 2");
    let binom = |k: usize| Int::binomial(n as u64, k as u64);
    let mut g = binom(1);
    let mut lambda = vec![Int::ONE];
    for k in 2..n {
        let b = binom(k);
        if g.divides(&b) {
            lambda.push(Int::ZERO);
            continue;
        }
        let (g2, s, t) = Int::extended_gcd(&g, &b);
        for l in lambda.iter_mut() {
            *l = &*l * &s;
        }
        lambda.push(t);
        g = g2;
    }
    (g, lambda)
}

/// Convenience wrappers over the shared engine with the default convention.
pub fn phi(k: usize, a: &FreePoly, order: usize) -> Result<FreePoly> {
    Engine::shared(order, Convention::default()).phi(k, a)
}

pub fn upsilon(p: usize, q: usize, order: usize, conv: Convention) -> Result<FreePoly> {
    Engine::shared(order, conv).upsilon(p, q)
}

pub fn fgl_coeff(i: usize, j: usize, order: usize) -> Result<FreePoly> {
    Engine::shared(order, Convention::default()).fgl_coeff(i, j)
}

/// The independent route to the formal inverse: `[-1](x)` realizes as `X(-T)`.
pub fn formal_inverse_by_negation(t_order: i32) -> Vec<FreePoly> {
    let ctx = HurContext::new(1, t_order);
    let s = orientation_series(1, 0, t_order).negate_var(0);
    let e = ctx.extract_left(&s).expect("X(-T) lies in the span");
    (0..=t_order).map(|k| e.coeff(&[k])).collect()
}

/// Realizes `sum a[i,j] X(T1)^i X(T2)^j` in two variables at T-order `order + 1`.
pub fn fgl_reconstruction(table: &FglTable) -> TSeries {
    let t_order = table.order as i32 + 1;
    let ctx = HurContext::new(2, t_order);
    let mut out = TSeries::zero(2, t_order);
    for ((i, j), a) in &table.a {
        let m = ctx.realize_mono(&Mono::from_slice(&[*i as i32, *j as i32]));
        out = out.add(&m.lmul(a));
    }
    out
}

/// `(m (x) m)(chi (x) Delta m (x) chi)(Delta (x) Delta)` applied to `x (x) x`,
/// realized in two variables at T-order `order`. It should equal `X(T_2) X(T_1)`.
pub fn schauenburg_series(engine: &Engine, order: i32) -> Result<TSeries> {
    if order as usize > engine.order() + 1 {
        return Err(Error::PrecisionExhausted(format!("T-order {order} needs engine order >= {}", order - 1)));
    }
    let ctx = HurContext::new(4, order);
    let sum2 = ts_substitute_sum(&orientation_series(1, 0, order), 2);
    let (x12, x23, x34) = (sum2.embed(4, &[0, 1]), sum2.embed(4, &[1, 2]), sum2.embed(4, &[2, 3]));
    let e0 = ctx.extract_left(&ts_mul(&x12, &x34))?;
    let iota = engine.formal_inverse();
    let chi = |j: usize| {
        let mut s = TSeries::zero(4, order);
        for k in 1..=order as usize {
            s = s.add(&ctx.power(j, k).lmul(&iota[k]));
        }
        s
    };
    let powers = |s: &TSeries| {
        let mut v = vec![TSeries::one(4, order)];
        for k in 1..=order as usize {
            let next = ts_mul(&v[k - 1], s);
            v.push(next);
        }
        v
    };
    let (c1, d23, c4) = (powers(&chi(0)), powers(&x23), powers(&chi(3)));
    let mut acc = TSeries::zero(4, order);
    for (e, c) in e0.terms() {
        let [a, b, m, d] = [0, 1, 2, 3].map(|i| e.0[i] as usize);
        acc = acc.add(&ts_mul(&ts_mul(&c1[a], &d23[b + m]), &c4[d]).lmul(c));
    }
    let e1 = ctx.extract_left(&acc)?;
    let mut merged = XExpansion::zero(2, order);
    for (e, c) in e1.terms() {
        merged.add_term(Mono::from_slice(&[e.0[0] + e.0[1], e.0[2] + e.0[3]]), c);
    }
    Ok(HurContext::new(2, order).realize(&merged))
}
