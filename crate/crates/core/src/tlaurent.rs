//! Truncated multivariate series in central variables `T1..Tn` with
//! free-algebra coefficients. Laurent exponents appear only through
//! [`ts_invert`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::freealg::{FreePoly, PolyAcc};
use crate::int::Int;

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono(pub SmallVec<[i32; 4]>);

impl Mono {
    pub fn zeros(n: usize) -> Mono {
        Mono(SmallVec::from_elem(0, n))
    }

    pub fn from_slice(e: &[i32]) -> Mono {
        Mono(SmallVec::from_slice(e))
    }

    /// `T_j^k` in `n` variables.
    pub fn var_power(n: usize, j: usize, k: i32) -> Mono {
        let mut m = Mono::zeros(n);
        m.0[j] = k;
        m
    }

    pub fn degree(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponent vectors with nonnegative entries and total degree exactly `d`,
/// in graded-lex order.
pub fn monomials_of_degree(n: usize, d: i32) -> Vec<Mono> {
    fn rec(n: usize, rest: i32, cur: &mut Vec<i32>, out: &mut Vec<Mono>) {
        if cur.len() + 1 == n {
            cur.push(rest);
            out.push(Mono::from_slice(cur));
            cur.pop();
            return;
        }
        for e in 0..=rest {
            cur.push(e);
            rec(n, rest - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Mono::zeros(0));
        }
        return out;
    }
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// A series truncated at total degree `order`: terms of higher total degree
/// are unknown and never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TSeries {
    n_vars: usize,
    order: i32,
    terms: BTreeMap<Mono, FreePoly>,
}

impl TSeries {
    pub fn zero(n_vars: usize, order: i32) -> TSeries {
        TSeries { n_vars, order, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize, order: i32) -> TSeries {
        TSeries::monomial(Mono::zeros(n_vars), FreePoly::one(), n_vars, order)
    }

    pub fn monomial(e: Mono, c: FreePoly, n_vars: usize, order: i32) -> TSeries {
        let mut s = TSeries::zero(n_vars, order);
        s.add_term(e, &c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, FreePoly)>>(n_vars: usize, order: i32, iter: I) -> TSeries {
        let mut s = TSeries::zero(n_vars, order);
        for (e, c) in iter {
            s.add_term(e, &c);
        }
        s
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Mono, FreePoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[i32]) -> FreePoly {
        self.terms.get(&Mono::from_slice(e)).cloned().unwrap_or_default()
    }

    /// Minimal total degree present.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().map(Mono::degree)
    }

    /// Adds `c * T^e`, ignoring terms beyond the order.
    pub fn add_term(&mut self, e: Mono, c: &FreePoly) {
        assert_eq!(e.len(), self.n_vars, "exponent vector length");
        if e.degree() > self.order || c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn truncate(&self, order: i32) -> TSeries {
        let order = order.min(self.order);
        TSeries {
            n_vars: self.n_vars,
            order,
            terms: self.terms.iter().filter(|(e, _)| e.degree() <= order).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    fn combine(&self, other: &TSeries, negate: bool) -> TSeries {
        assert_eq!(self.n_vars, other.n_vars, "variable count mismatch");
        let mut out = self.truncate(self.order.min(other.order));
        for (e, c) in &other.terms {
            if negate {
                out.add_term(e.clone(), &-c);
            } else {
                out.add_term(e.clone(), c);
            }
        }
        out
    }

    pub fn add(&self, other: &TSeries) -> TSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &TSeries) -> TSeries {
        self.combine(other, true)
    }

    pub fn neg(&self) -> TSeries {
        TSeries {
            n_vars: self.n_vars,
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    /// `c * self`, with `c` multiplied on the left of every coefficient.
    pub fn lmul(&self, c: &FreePoly) -> TSeries {
        TSeries::from_terms(self.n_vars, self.order, self.terms.iter().map(|(e, v)| (e.clone(), c * v)))
    }

    /// `self * c`, with `c` multiplied on the right of every coefficient.
    pub fn rmul(&self, c: &FreePoly) -> TSeries {
        TSeries::from_terms(self.n_vars, self.order, self.terms.iter().map(|(e, v)| (e.clone(), v * c)))
    }

    /// Permutes variables: variable `i` of the result is variable `perm[i]` of `self`.
    pub fn permute_vars(&self, perm: &[usize]) -> TSeries {
        assert_eq!(perm.len(), self.n_vars);
        TSeries {
            n_vars: self.n_vars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (Mono(perm.iter().map(|&p| e.0[p]).collect()), c.clone()))
                .collect(),
        }
    }

    pub fn swap_vars(&self, i: usize, j: usize) -> TSeries {
        let mut perm: Vec<usize> = (0..self.n_vars).collect();
        perm.swap(i, j);
        self.permute_vars(&perm)
    }

    /// Sets `T_j = 0` and removes the variable.
    pub fn drop_var(&self, j: usize) -> TSeries {
        let mut out = TSeries::zero(self.n_vars - 1, self.order);
        for (e, c) in &self.terms {
            if e.0[j] == 0 {
                let mut f = e.0.clone();
                f.remove(j);
                out.add_term(Mono(f), c);
            }
        }
        out
    }

    /// Substitutes `T_j -> -T_j`.
    pub fn negate_var(&self, j: usize) -> TSeries {
        TSeries {
            n_vars: self.n_vars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), if e.0[j].rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Embeds into `n` variables, sending variable `i` to `positions[i]`.
    pub fn embed(&self, n: usize, positions: &[usize]) -> TSeries {
        assert_eq!(positions.len(), self.n_vars);
        let mut out = TSeries::zero(n, self.order);
        for (e, c) in &self.terms {
            let mut f = Mono::zeros(n);
            for (i, &p) in positions.iter().enumerate() {
                f.0[p] = e.0[i];
            }
            out.add_term(f, c);
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: &dyn Fn(&FreePoly) -> FreePoly) -> TSeries {
        TSeries::from_terms(self.n_vars, self.order, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.n_vars,
            "order": self.order,
            "terms": self.terms.iter().map(|(e, c)| json!({"e": e.as_slice(), "coeff": c.to_json()})).collect::<Vec<_>>(),
        })
    }
}

/// Cauchy product; coefficients of `a` stand to the left of those of `b`.
///
/// The result order is `min(order_a + val_b, order_b + val_a)` when either
/// factor has negative valuation, which is exactly how far the product is
/// determined; otherwise it is the smaller of the two orders.
pub fn ts_mul(a: &TSeries, b: &TSeries) -> TSeries {
    assert_eq!(a.n_vars, b.n_vars, "variable count mismatch");
    let (va, vb) = (a.valuation().unwrap_or(0), b.valuation().unwrap_or(0));
    let order = if va < 0 || vb < 0 {
        (a.order + vb).min(b.order + va)
    } else {
        a.order.min(b.order)
    };
    let mut acc: HashMap<Mono, PolyAcc> = HashMap::new();
    for (e1, c1) in &a.terms {
        let d1 = e1.degree();
        for (e2, c2) in &b.terms {
            if d1 + e2.degree() > order {
                break;
            }
            acc.entry(e1.add(e2)).or_default().add_product(c1, c2, &Int::ONE);
        }
    }
    let mut out = TSeries::zero(a.n_vars, order);
    for (e, p) in acc {
        let p = p.finish();
        if !p.is_zero() {
            out.terms.insert(e, p);
        }
    }
    out
}

pub fn ts_pow(a: &TSeries, k: usize) -> TSeries {
    let mut acc = TSeries::one(a.n_vars, a.order);
    for _ in 0..k {
        acc = ts_mul(&acc, a);
    }
    acc
}

/// Substitutes `T -> T1 + ... + Tk` into a univariate series.
pub fn ts_substitute_sum(s: &TSeries, k: usize) -> TSeries {
    assert_eq!(s.n_vars, 1, "substitution needs a univariate series");
    let mut out = TSeries::zero(k, s.order);
    for (e, c) in &s.terms {
        let m = e.0[0];
        assert!(m >= 0, "substitution into a Laurent series");
        for f in monomials_of_degree(k, m) {
            out.add_term(f.clone(), &c.scale(&multinomial(f.as_slice())));
        }
    }
    out
}

fn multinomial(parts: &[i32]) -> Int {
    let mut n = 0u64;
    let mut acc = Int::ONE;
    for &p in parts {
        n += p as u64;
        acc = &acc * &Int::binomial(n, p as u64);
    }
    acc
}

/// Two-sided inverse of a series `T_j + (higher powers of T_j)`.
///
/// If the input is known through degree `N`, the inverse is known through
/// degree `N - 2`, and its lowest exponent is `-1`.
pub fn ts_invert(s: &TSeries, j: usize) -> Result<TSeries> {
    let n = s.n_vars;
    let mut u = Vec::new();
    for (e, c) in &s.terms {
        if e.0.iter().enumerate().any(|(i, &x)| i != j && x != 0) {
            return Err(Error::NotInvertible(format!("series involves variables other than T{}", j + 1)));
        }
        let k = e.0[j] - 1;
        if k < 0 {
            return Err(Error::NotInvertible(format!("term below T{}", j + 1)));
        }
        let k = k as usize;
        if u.len() <= k {
            u.resize(k + 1, FreePoly::zero());
        }
        u[k] = c.clone();
    }
    if u.first().map_or(true, |c| !c.is_one()) {
        return Err(Error::NotInvertible("leading coefficient is not the unit".into()));
    }
    // u = 1 + u1 T + ... is known through T^{N-1}; its inverse w to the same degree.
    let known = (s.order - 1).max(0) as usize;
    u.resize(known + 1, FreePoly::zero());
    let mut w = vec![FreePoly::one()];
    for k in 1..=known {
        let mut acc = PolyAcc::new();
        for i in 0..k {
            acc.add_product(&w[i], &u[k - i], &Int::from(-1));
        }
        w.push(acc.finish());
    }
    let order = s.order - 2;
    let mut out = TSeries::zero(n, order);
    for (k, c) in w.into_iter().enumerate() {
        out.add_term(Mono::var_power(n, j, k as i32 - 1), &c);
    }
    Ok(out)
}
