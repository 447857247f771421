//! The Hurewicz model: `x_j` is realized as `X(T_j) = T_j + Z1 T_j^2 + Z2 T_j^3 + ...`
//! with central `T_j`, and expansions over ordered monomials
//! `x_1^{e_1} ... x_n^{e_n}` with coefficients on the left are recovered by
//! triangular extraction.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freealg::{FreePoly, PolyAcc};
use crate::int::Int;
use crate::tlaurent::{monomials_of_degree, ts_mul, Mono, TSeries};

/// Which index orientation names the braiding coefficients.
///
/// `Transposed` names by the published tables: `Ups[p,q]` is the coefficient
/// of `x1^{1+q} x2^{1+p}` in `x2 x1`. `Literal` reads the commutation rule
/// `yx = sum Ups[p,q] x^{1+p} y^{1+q}` at face value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BraidOrientation {
    Transposed,
    Literal,
}

/// Which side relation the Vieta division solves.
///
/// `Left`: `v_k x_k = y_k v_k`. `Right`: `x_k v_k = v_k y_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VietaSide {
    Left,
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Convention {
    pub braid: BraidOrientation,
    pub vieta_side: VietaSide,
}

impl Convention {
    /// Reproduces the published braiding, Vieta and Chern tables.
    pub const PAPER_FIGURES: Convention =
        Convention { braid: BraidOrientation::Transposed, vieta_side: VietaSide::Left };
    pub const LITERAL: Convention = Convention { braid: BraidOrientation::Literal, vieta_side: VietaSide::Right };

    pub const NAMES: [&'static str; 2] = ["paper-figures", "literal"];

    pub fn from_name(name: &str) -> Result<Convention> {
        match name {
            "paper-figures" => Ok(Convention::PAPER_FIGURES),
            "literal" => Ok(Convention::LITERAL),
            _ => Err(Error::BadInput(format!(
                "unknown convention {name:?}; expected one of {}",
                Convention::NAMES.join(", ")
            ))),
        }
    }

    pub fn name(&self) -> String {
        if *self == Convention::PAPER_FIGURES {
            "paper-figures".into()
        } else if *self == Convention::LITERAL {
            "literal".into()
        } else {
            format!("{:?}/{:?}", self.braid, self.vieta_side).to_lowercase()
        }
    }
}

impl Default for Convention {
    fn default() -> Self {
        Convention::PAPER_FIGURES
    }
}

/// `X(T_j) = T_j + sum_{k>=1} Z_k T_j^{1+k}` truncated at total degree `order`.
pub fn orientation_series(n_vars: usize, j: usize, order: i32) -> TSeries {
    TSeries::from_terms(
        n_vars,
        order,
        (0..order.max(0)).map(|k| (Mono::var_power(n_vars, j, k + 1), FreePoly::gen(k as usize))),
    )
}

/// `c[k][n]` = coefficient of `T^{1+n}` in `X(T)^{1+k}`, for `k <= n <= n_max`.
pub fn power_coefficients(n_max: usize) -> Vec<Vec<FreePoly>> {
    let order = n_max as i32 + 1;
    let x = orientation_series(1, 0, order);
    let mut p = x.clone();
    let mut out = Vec::with_capacity(n_max + 1);
    for k in 0..=n_max {
        out.push((0..=n_max).map(|n| p.coeff(&[1 + n as i32])).collect());
        if k < n_max {
            p = ts_mul(&p, &x);
        }
    }
    out
}

/// Left coefficients `r_0, ..., r_{N-1}` with `sum_j r_j X(T)^{1+j} = T` through degree `N`.
pub fn reversion(order: usize) -> Vec<FreePoly> {
    assert!(order >= 1);
    let c = power_coefficients(order - 1);
    let mut r: Vec<FreePoly> = Vec::with_capacity(order);
    for d in 0..order {
        let mut acc = PolyAcc::new();
        if d == 0 {
            acc.add(&FreePoly::one());
        }
        for (j, rj) in r.iter().enumerate() {
            acc.add_product(rj, &c[j][d], &Int::from(-1));
        }
        r.push(acc.finish());
    }
    r
}

/// `sum_E c_E x_1^{e_1} ... x_n^{e_n}`, coefficients on the left, truncated
/// at total x-degree `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct XExpansion {
    n_vars: usize,
    order: i32,
    terms: BTreeMap<Mono, FreePoly>,
}

impl XExpansion {
    pub fn zero(n_vars: usize, order: i32) -> XExpansion {
        XExpansion { n_vars, order, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize, order: i32) -> XExpansion {
        XExpansion::monomial(Mono::zeros(n_vars), FreePoly::one(), n_vars, order)
    }

    /// The single variable `x_{j+1}`.
    pub fn var(n_vars: usize, j: usize, order: i32) -> XExpansion {
        XExpansion::monomial(Mono::var_power(n_vars, j, 1), FreePoly::one(), n_vars, order)
    }

    pub fn monomial(e: Mono, c: FreePoly, n_vars: usize, order: i32) -> XExpansion {
        let mut x = XExpansion::zero(n_vars, order);
        x.add_term(e, &c);
        x
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, FreePoly)>>(n_vars: usize, order: i32, iter: I) -> XExpansion {
        let mut x = XExpansion::zero(n_vars, order);
        for (e, c) in iter {
            x.add_term(e, &c);
        }
        x
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

    pub fn add_term(&mut self, e: Mono, c: &FreePoly) {
        assert_eq!(e.len(), self.n_vars, "exponent vector length");
        assert!(e.0.iter().all(|&x| x >= 0), "negative exponent in an x-expansion");
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

    pub fn add(&self, other: &XExpansion) -> XExpansion {
        assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.truncate(other.order);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &XExpansion) -> XExpansion {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> XExpansion {
        XExpansion {
            n_vars: self.n_vars,
            order: self.order,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Int) -> XExpansion {
        XExpansion::from_terms(self.n_vars, self.order, self.terms.iter().map(|(e, c)| (e.clone(), c.scale(k))))
    }

    /// `c * self`: multiplies every coefficient on the left.
    pub fn lmul(&self, c: &FreePoly) -> XExpansion {
        XExpansion::from_terms(self.n_vars, self.order, self.terms.iter().map(|(e, v)| (e.clone(), c * v)))
    }

    pub fn truncate(&self, order: i32) -> XExpansion {
        let order = order.min(self.order);
        XExpansion {
            n_vars: self.n_vars,
            order,
            terms: self.terms.iter().filter(|(e, _)| e.degree() <= order).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// The part of total degree exactly `d`.
    pub fn degree_part(&self, d: i32) -> XExpansion {
        XExpansion {
            n_vars: self.n_vars,
            order: self.order,
            terms: self.terms.iter().filter(|(e, _)| e.degree() == d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().map(Mono::degree)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.n_vars,
            "order": self.order,
            "terms": self.terms.iter().map(|(e, c)| json!({"e": e.as_slice(), "coeff": c.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = monomial_latex(e);
                let coeff = c.to_latex();
                match (c.is_one(), mono.is_empty()) {
                    (true, false) => mono,
                    (_, true) => coeff,
                    _ if c.num_terms() == 1 => format!("{coeff}{mono}"),
                    _ => format!("\\left({coeff}\\right){mono}"),
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn monomial_latex(e: &Mono) -> String {
    let mut s = String::new();
    for (i, &k) in e.as_slice().iter().enumerate() {
        match k {
            0 => {}
            1 => s.push_str(&format!("x_{{{}}}", i + 1)),
            _ => s.push_str(&format!("x_{{{}}}^{{{k}}}", i + 1)),
        }
    }
    s
}

/// Text form of an exponent vector, e.g. `x1^2*x2`.
pub fn monomial_text(e: &[i32]) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for XExpansion {
    /// One line per ordered monomial: `x1^2*x2^2: <coefficient>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return writeln!(f, "0");
        }
        for (e, c) in &self.terms {
            writeln!(f, "{}: {}", monomial_text(e.as_slice()), c)?;
        }
        Ok(())
    }
}

/// Cached powers of the orientation series in `n_vars` variables at a fixed order.
///
/// The realization cache is internally synchronized, so one context may be
/// shared across threads.
pub struct HurContext {
    n_vars: usize,
    order: i32,
    powers: Vec<Vec<TSeries>>,
    cache: Mutex<HashMap<Mono, Arc<TSeries>>>,
}

impl HurContext {
    pub fn new(n_vars: usize, order: i32) -> HurContext {
        assert!(order >= 0);
        let powers = (0..n_vars)
            .map(|j| {
                let x = orientation_series(n_vars, j, order);
                let mut v = vec![TSeries::one(n_vars, order)];
                for k in 1..=order as usize {
                    let next = ts_mul(&v[k - 1], &x);
                    v.push(next);
                }
                v
            })
            .collect();
        HurContext { n_vars, order, powers, cache: Mutex::new(HashMap::new()) }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn order(&self) -> i32 {
        self.order
    }

    pub fn x(&self, j: usize) -> &TSeries {
        &self.powers[j][1]
    }

    /// `X(T_j)^k` for `k <= order`.
    pub fn power(&self, j: usize, k: usize) -> &TSeries {
        &self.powers[j][k]
    }

    /// `X(T_1)^{e_1} ... X(T_n)^{e_n}`.
    pub fn realize_mono(&self, e: &Mono) -> Arc<TSeries> {
        if let Some(s) = self.cache.lock().expect("cache poisoned").get(e) {
            return s.clone();
        }
        let mut acc = TSeries::one(self.n_vars, self.order);
        for (j, &k) in e.as_slice().iter().enumerate() {
            if k > 0 {
                acc = if k > self.order {
                    TSeries::zero(self.n_vars, self.order)
                } else {
                    ts_mul(&acc, &self.powers[j][k as usize])
                };
            }
        }
        let acc = Arc::new(acc);
        self.cache.lock().expect("cache poisoned").insert(e.clone(), acc.clone());
        acc
    }

    pub fn realize(&self, x: &XExpansion) -> TSeries {
        assert_eq!(x.n_vars, self.n_vars);
        let order = self.order.min(x.order);
        let mut acc: HashMap<Mono, PolyAcc> = HashMap::new();
        for (e, c) in &x.terms {
            for (f, v) in self.realize_mono(e).terms() {
                if f.degree() > order {
                    break;
                }
                acc.entry(f.clone()).or_default().add_product(c, v, &Int::ONE);
            }
        }
        TSeries::from_terms(self.n_vars, order, acc.into_iter().map(|(e, p)| (e, p.finish())))
    }

    /// The unique expansion over ordered monomials whose realization is `s`.
    pub fn extract_left(&self, s: &TSeries) -> Result<XExpansion> {
        self.extract_with(s, &|e| self.realize_mono(e))
    }

    /// Extraction against a basis indexed by exponent vectors, where the basis
    /// element for `E` realizes as `T^E` plus terms of higher total degree.
    pub fn extract_in_basis(&self, s: &TSeries, basis: &dyn Fn(&Mono) -> TSeries) -> Result<XExpansion> {
        self.extract_with(s, &|e| {
            let b = basis(e);
            let mut it = b.terms().iter();
            let lead = it.next();
            assert!(
                lead.map_or(false, |(m, c)| m == e && c.is_one()) && it.all(|(m, _)| m.degree() > e.degree()),
                "basis element for {:?} is not unitriangular",
                e.as_slice()
            );
            Arc::new(b)
        })
    }

    fn extract_with(&self, s: &TSeries, basis: &dyn Fn(&Mono) -> Arc<TSeries>) -> Result<XExpansion> {
        assert_eq!(s.n_vars(), self.n_vars, "variable count mismatch");
        let order = self.order.min(s.order());
        if let Some((e, c)) = s.terms().iter().find(|(e, _)| e.0.iter().any(|&k| k < 0)) {
            return Err(Error::NotInSpan { monomial: e.as_slice().to_vec(), residual: c.clone() });
        }
        let mut residual: HashMap<Mono, PolyAcc> = HashMap::new();
        for (e, c) in s.terms() {
            residual.entry(e.clone()).or_default().add(c);
        }
        let mut out = XExpansion::zero(self.n_vars, order);
        for d in 0..=order {
            for e in monomials_of_degree(self.n_vars, d) {
                let Some(acc) = residual.remove(&e) else { continue };
                let c = acc.finish();
                if c.is_zero() {
                    continue;
                }
                for (f, v) in basis(&e).terms() {
                    let fd = f.degree();
                    if fd > order {
                        break;
                    }
                    if fd > d {
                        residual.entry(f.clone()).or_default().add_product(&c, v, &Int::from(-1));
                    }
                }
                out.terms.insert(e, c);
            }
        }
        Ok(out)
    }

    /// Product of two expansions, computed through the realization.
    pub fn mul(&self, a: &XExpansion, b: &XExpansion) -> XExpansion {
        let s = ts_mul(&self.realize(a), &self.realize(b));
        self.extract_left(&s).expect("products of expansions stay in the span")
    }
}

/// The braiding on a two-variable expansion: realize, exchange `T_1` and `T_2`, extract.
pub fn braid_swap(ctx: &HurContext, e: &XExpansion) -> Result<XExpansion> {
    assert_eq!(ctx.n_vars(), 2);
    ctx.extract_left(&ctx.realize(e).swap_vars(0, 1))
}

/// Compares [`normal_order_rewrite`] on the product `x_{w_1} ... x_{w_k}` (0-based
/// indices) with extraction of its realization.
pub fn confluence_holds(word: &[usize], rules: &dyn CommutationRules, ctx: &HurContext) -> Result<bool> {
    let factors: Vec<Factor> = word.iter().map(|&j| Factor::X(j)).collect();
    let rewritten = normal_order_rewrite(&factors, rules, ctx.n_vars(), ctx.order())?;
    let mut s = TSeries::one(ctx.n_vars(), ctx.order());
    for &j in word {
        s = ts_mul(&s, ctx.x(j));
    }
    Ok(rewritten == ctx.extract_left(&s)?)
}

/// Source of the two commutation rules used by [`normal_order_rewrite`].
pub trait CommutationRules {
    /// Literal braiding coefficient: `x_l x_k = sum u(p,q) x_k^{1+p} x_l^{1+q}` for `l > k`.
    fn upsilon_literal(&self, p: usize, q: usize) -> Result<FreePoly>;
    /// `x r = sum_k phi_k(r) x^{1+k}`.
    fn phi(&self, k: usize, a: &FreePoly) -> Result<FreePoly>;
}

/// One factor of a product to be normal ordered.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    /// The variable `x_{j+1}`.
    X(usize),
    Scalar(FreePoly),
}

/// Puts a product of variables and scalars into ordered-monomial form with
/// coefficients on the left, always rewriting the leftmost violation.
pub fn normal_order_rewrite(
    expr: &[Factor],
    rules: &dyn CommutationRules,
    n_vars: usize,
    order: i32,
) -> Result<XExpansion> {
    for f in expr {
        if let Factor::X(j) = f {
            if *j >= n_vars {
                return Err(Error::BadInput(format!("variable x{} outside {n_vars} variables", j + 1)));
            }
        }
    }
    let mut out = XExpansion::zero(n_vars, order);
    let mut pending: BTreeMap<(usize, Vec<Factor>), FreePoly> = BTreeMap::new();
    push_term(&mut pending, FreePoly::one(), expr.to_vec(), order);

    while let Some(((deg, items), coeff)) = pending.pop_first() {
        let violation = (0..items.len().saturating_sub(1)).find(|&i| match (&items[i], &items[i + 1]) {
            (Factor::X(_), Factor::Scalar(_)) => true,
            (Factor::X(l), Factor::X(k)) => l > k,
            _ => false,
        });
        let Some(i) = violation else {
            let mut e = Mono::zeros(n_vars);
            for f in &items {
                if let Factor::X(j) = f {
                    e.0[*j] += 1;
                }
            }
            out.add_term(e, &coeff);
            continue;
        };
        let room = (order - deg as i32) as usize;
        let (head, tail) = (&items[..i], &items[i + 2..]);
        match (&items[i], &items[i + 1]) {
            (Factor::X(j), Factor::Scalar(r)) => {
                for k in 0..=room {
                    let p = rules.phi(k, r)?;
                    if p.is_zero() {
                        continue;
                    }
                    let mut v = head.to_vec();
                    v.push(Factor::Scalar(p));
                    v.extend(std::iter::repeat(Factor::X(*j)).take(1 + k));
                    v.extend_from_slice(tail);
                    push_term(&mut pending, coeff.clone(), v, order);
                }
            }
            (Factor::X(l), Factor::X(k)) => {
                for p in 0..=room {
                    for q in 0..=room - p {
                        let u = rules.upsilon_literal(p, q)?;
                        if u.is_zero() {
                            continue;
                        }
                        let mut v = head.to_vec();
                        v.push(Factor::Scalar(u));
                        v.extend(std::iter::repeat(Factor::X(*k)).take(1 + p));
                        v.extend(std::iter::repeat(Factor::X(*l)).take(1 + q));
                        v.extend_from_slice(tail);
                        push_term(&mut pending, coeff.clone(), v, order);
                    }
                }
            }
            _ => unreachable!(),
        }
    }
    Ok(out)
}

/// Normalizes a term (leading scalars into the coefficient, adjacent scalars
/// merged) and adds it to the work list unless it exceeds the order.
fn push_term(pending: &mut BTreeMap<(usize, Vec<Factor>), FreePoly>, mut coeff: FreePoly, items: Vec<Factor>, order: i32) {
    let mut norm: Vec<Factor> = Vec::with_capacity(items.len());
    for f in items {
        match f {
            Factor::Scalar(s) => {
                if s.is_zero() {
                    return;
                }
                match norm.last_mut() {
                    None => coeff = &coeff * &s,
                    Some(Factor::Scalar(prev)) => *prev = &*prev * &s,
                    Some(_) => norm.push(Factor::Scalar(s)),
                }
            }
            x => norm.push(x),
        }
    }
    let deg = norm.iter().filter(|f| matches!(f, Factor::X(_))).count();
    if deg as i32 > order || coeff.is_zero() {
        return;
    }
    let slot = pending.entry((deg, norm)).or_default();
    *slot = &*slot + &coeff;
}
