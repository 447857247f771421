//! Symmetric and quasi-symmetric functions in the Hurewicz model: the `theta`
//! coefficients of `e_2`, Vieta coordinates, Chern classes, the monomial
//! quasi-symmetric basis, the splitting coefficients `B_{i,j}` and the
//! graded dimension bookkeeping.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::bfk::{act, q_poly, BElement};
use crate::error::{Error, Result};
use crate::fgl::Engine;
use crate::freealg::{FreePoly, Word};
use crate::hur::{orientation_series, BraidOrientation, Convention, HurContext, VietaSide, XExpansion};
use crate::int::Int;
use crate::tlaurent::{ts_invert, ts_mul, Mono, TSeries};

/// `theta_{p,q}` for `p + q <= order`, from `yx = sum theta_{p,q} beta_{p,q}`.
pub fn theta_table(order: usize) -> BTreeMap<(usize, usize), FreePoly> {
    assert!(order >= 2);
    let ctx = HurContext::new(2, order as i32);
    let s = ts_mul(ctx.x(1), ctx.x(0));
    let basis = |e: &Mono| {
        let (p, q) = (e.0[0] as usize, e.0[1] as usize);
        if p > q {
            ts_mul(ctx.power(1, q), ctx.power(0, p))
        } else {
            (*ctx.realize_mono(e)).clone()
        }
    };
    let ex = ctx.extract_in_basis(&s, &basis).expect("yx has no negative exponents");
    ex.terms().iter().map(|(e, c)| ((e.0[0] as usize, e.0[1] as usize), c.clone())).collect()
}

/// `e_2(x, y) = xy + sum_{p<q} theta_{p,q} x^p y^q`.
pub fn e2(order: usize) -> XExpansion {
    let theta = theta_table(order);
    XExpansion::from_terms(
        2,
        order as i32,
        theta
            .into_iter()
            .filter(|((p, q), _)| p < q || (*p == 1 && *q == 1))
            .map(|((p, q), c)| (Mono::from_slice(&[p as i32, q as i32]), c)),
    )
}

/// Vieta coordinates `y_k` with their monic divisors `v_k` (index 0 holds `k = 1`).
#[derive(Clone, Debug)]
pub struct VietaFrame {
    pub n_vars: usize,
    pub order: i32,
    pub y: Vec<XExpansion>,
    pub v: Vec<XExpansion>,
    pub side: VietaSide,
}

impl VietaFrame {
    /// Checks the defining relation `v_k x_k = y_k v_k` (or the mirrored one)
    /// through the frame's order.
    pub fn side_relation_holds(&self, side: VietaSide) -> bool {
        let ctx = HurContext::new(self.n_vars, self.order);
        (0..self.n_vars).all(|k| {
            let x = XExpansion::var(self.n_vars, k, self.order);
            let (y, v) = (&self.y[k], &self.v[k]);
            let d = match side {
                VietaSide::Left => ctx.mul(v, &x).sub(&ctx.mul(y, v)),
                VietaSide::Right => ctx.mul(&x, v).sub(&ctx.mul(v, y)),
            };
            d.is_zero()
        })
    }

    /// `sum_{i_1 < ... < i_k} y_{i_k} ... y_{i_1}`, without the sign `(-1)^k`.
    /// On the right side the factors run in increasing order instead.
    pub fn elementary(&self, k: usize, ctx: &HurContext) -> XExpansion {
        elementary_in(&self.y, k, ctx, self.side)
    }
}

fn elementary_in(ys: &[XExpansion], k: usize, ctx: &HurContext, side: VietaSide) -> XExpansion {
    let (n, order) = (ctx.n_vars(), ctx.order());
    let mut acc = XExpansion::zero(n, order);
    for comb in combinations(ys.len(), k) {
        let mut prod = XExpansion::one(n, order);
        let factors: Vec<usize> = match side {
            VietaSide::Left => comb.iter().rev().copied().collect(),
            VietaSide::Right => comb,
        };
        for i in factors {
            prod = ctx.mul(&prod, &ys[i]);
        }
        acc = acc.add(&prod);
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Divides `num` by `gen` treating exponents commutatively; `gen` must be monic in
/// variable `k` with integer coefficients. Returns quotient and remainder.
fn comm_divide(num: &XExpansion, gen: &XExpansion, k: usize) -> (XExpansion, XExpansion) {
    let (n, order) = (num.n_vars(), num.order());
    let gdeg = gen.terms().keys().map(|e| e.0[k]).max().expect("nonzero divisor");
    let lead: Vec<&Mono> = gen.terms().keys().filter(|e| e.0[k] == gdeg).collect();
    assert!(lead.len() == 1 && lead[0].degree() == gdeg && gen.terms()[lead[0]].is_one(), "divisor is not monic");
    let mut rem = num.clone();
    let mut quot = XExpansion::zero(n, order);
    loop {
        let Some((e, c)) = rem
            .terms()
            .iter()
            .filter(|(e, _)| e.0[k] >= gdeg)
            .max_by(|a, b| a.0 .0[k].cmp(&b.0 .0[k]).then_with(|| a.0.cmp(b.0)))
            .map(|(e, c)| (e.clone(), c.clone()))
        else {
            break;
        };
        let mut sh = e.clone();
        sh.0[k] -= gdeg;
        quot.add_term(sh.clone(), &c);
        for (g, gc) in gen.terms() {
            assert!(gc.max_weight() == Some(0), "divisor has a non-integer coefficient");
            rem.add_term(sh.add(g), &c.scale(&-gc.constant_term()));
        }
    }
    (quot, rem)
}

/// Vieta coordinates by degree-by-degree division against the monic `v_k`,
/// correct through total degree `order`.
pub fn vieta(n_vars: usize, order: usize, conv: Convention) -> VietaFrame {
    assert!(n_vars >= 1 && order >= n_vars);
    let target = order as i32;
    // dividing by v_k costs k - 1 degrees
    let order = target + n_vars as i32 - 1;
    let ctx = HurContext::new(n_vars, order);
    let mut ys: Vec<XExpansion> = Vec::new();
    let mut vs = Vec::new();
    for k in 0..n_vars {
        let xk = XExpansion::var(n_vars, k, order);
        let mut v = XExpansion::zero(n_vars, order);
        let mut xpow = XExpansion::one(n_vars, order);
        for l in (0..=k).rev() {
            let mut d = elementary_in(&ys, l, &ctx, conv.vieta_side);
            if l % 2 == 1 {
                d = d.neg();
            }
            v = v.add(&match conv.vieta_side {
                VietaSide::Left => ctx.mul(&d, &xpow),
                VietaSide::Right => ctx.mul(&xpow, &d),
            });
            xpow = ctx.mul(&xpow, &xk);
        }
        let vbar = v.degree_part(k as i32);
        let mut y = xk.clone();
        loop {
            let delta = match conv.vieta_side {
                VietaSide::Left => ctx.mul(&v, &xk).sub(&ctx.mul(&y, &v)),
                VietaSide::Right => ctx.mul(&xk, &v).sub(&ctx.mul(&v, &y)),
            };
            let Some(m) = delta.min_degree() else { break };
            if m > order {
                break;
            }
            let (z, r) = comm_divide(&delta.degree_part(m), &vbar, k);
            assert!(r.is_zero(), "Vieta division left a remainder in degree {m}");
            y = y.add(&z);
        }
        ys.push(y);
        vs.push(v);
    }
    VietaFrame {
        n_vars,
        order: target,
        y: ys.iter().map(|y| y.truncate(target)).collect(),
        v: vs.iter().map(|v| v.truncate(target)).collect(),
        side: conv.vieta_side,
    }
}

/// A composition, ordered by size and then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Composition(pub Vec<usize>);

impl Composition {
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "m[{}]", parts.join(","))
    }
}

/// All compositions of `size`.
pub fn compositions(size: usize) -> Vec<Composition> {
    if size == 0 {
        return vec![Composition(vec![])];
    }
    let mut out = Vec::new();
    for first in 1..=size {
        for rest in compositions(size - first) {
            let mut v = vec![first];
            v.extend(rest.0);
            out.push(Composition(v));
        }
    }
    out
}

/// `sum_I c_I m_I` with coefficients on the left, truncated at total size `order`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSymElement {
    pub order: i32,
    pub terms: BTreeMap<Composition, FreePoly>,
}

impl QSymElement {
    pub fn zero(order: i32) -> QSymElement {
        QSymElement { order, terms: BTreeMap::new() }
    }

    pub fn monomial(i: &[usize], order: i32) -> QSymElement {
        let mut q = QSymElement::zero(order);
        q.add_term(Composition(i.to_vec()), &FreePoly::one());
        q
    }

    pub fn add_term(&mut self, i: Composition, c: &FreePoly) {
        if c.is_zero() || i.size() as i32 > self.order {
            return;
        }
        let slot = self.terms.entry(i.clone()).or_default();
        *slot = &*slot + c;
        if slot.is_zero() {
            self.terms.remove(&i);
        }
    }

    pub fn coeff(&self, i: &[usize]) -> FreePoly {
        self.terms.get(&Composition(i.to_vec())).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &QSymElement) -> QSymElement {
        let mut out = QSymElement::zero(self.order.min(other.order));
        for (i, c) in self.terms.iter().chain(&other.terms) {
            out.add_term(i.clone(), c);
        }
        out
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(|i| i.len()).max().unwrap_or(0)
    }

    /// Truncation to total size `<= order`.
    pub fn truncate(&self, order: i32) -> QSymElement {
        let mut out = QSymElement::zero(order.min(self.order));
        for (i, c) in &self.terms {
            out.add_term(i.clone(), c);
        }
        out
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: &dyn Fn(&FreePoly) -> FreePoly) -> QSymElement {
        let mut out = QSymElement::zero(self.order);
        for (i, c) in &self.terms {
            out.add_term(i.clone(), &f(c));
        }
        out
    }

    /// Expansion over `n_vars` ordered variables.
    pub fn to_expansion(&self, n_vars: usize) -> XExpansion {
        let mut out = XExpansion::zero(n_vars, self.order);
        for (i, c) in &self.terms {
            for pos in combinations(n_vars, i.len()) {
                let mut e = Mono::zeros(n_vars);
                for (slot, &p) in pos.iter().enumerate() {
                    e.0[p] = i.0[slot] as i32;
                }
                out.add_term(e, c);
            }
        }
        out
    }

    /// Reads off `c_I` from an expansion and checks that `sum c_I m_I` reproduces it.
    pub fn from_expansion(x: &XExpansion) -> Result<QSymElement> {
        let mut q = QSymElement::zero(x.order());
        for (e, c) in x.terms() {
            let i = Composition(e.0.iter().filter(|&&k| k != 0).map(|&k| k as usize).collect());
            match q.terms.get(&i) {
                Some(prev) if prev != c => {
                    return Err(Error::NotQuasiSymmetric(format!(
                        "{i} has coefficients {prev} and {c} at different positions"
                    )))
                }
                Some(_) => {}
                None => {
                    q.terms.insert(i, c.clone());
                }
            }
        }
        let back = q.to_expansion(x.n_vars());
        if &back != x {
            let diff = back.sub(x);
            let (e, _) = diff.terms().iter().next().expect("nonzero difference");
            return Err(Error::NotQuasiSymmetric(format!("missing monomial at exponent {:?}", e.as_slice())));
        }
        Ok(q)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "terms": self.terms.iter().map(|(i, c)| json!({"I": i.0, "coeff": c.to_json()})).collect::<Vec<_>>(),
        })
    }

    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, c)| {
                let idx: String = i.0.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
                let m = if i.is_empty() { "1".to_string() } else { format!("m_{{{idx}}}") };
                if c.is_one() {
                    m
                } else {
                    format!("\\left({}\\right) {m}", c.to_latex())
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for QSymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (i, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{i}")?;
            } else {
                write!(f, "({c})*{i}")?;
            }
        }
        Ok(())
    }
}

/// `c_k = sum_{i_1 < ... < i_k} y_{i_k} ... y_{i_1}` over `n_vars` variables, in the `m_I` basis.
pub fn chern(k: usize, n_vars: usize, order: usize, conv: Convention) -> Result<QSymElement> {
    assert!(n_vars >= k);
    let frame = vieta(n_vars, order.max(n_vars), conv);
    let ctx = HurContext::new(n_vars, frame.order);
    QSymElement::from_expansion(&frame.elementary(k, &ctx).truncate(order as i32))
}

/// Product computed in `len(a) + len(b)` variables.
pub fn qsym_mul(a: &QSymElement, b: &QSymElement, order: usize) -> Result<QSymElement> {
    qsym_mul_in(a, b, order, (a.max_len() + b.max_len()).max(1))
}

/// Product computed in a given number of variables.
pub fn qsym_mul_in(a: &QSymElement, b: &QSymElement, order: usize, n_vars: usize) -> Result<QSymElement> {
    let ctx = HurContext::new(n_vars, order as i32);
    let a = a.truncate(order as i32);
    let b = b.truncate(order as i32);
    let prod = ctx.mul(&a.to_expansion(n_vars), &b.to_expansion(n_vars));
    QSymElement::from_expansion(&prod)
}

/// `m_I r = sum_J Q_J^{(I)}(phi)(r) m_{I+J}`.
pub fn qsym_scalar(i: &[usize], r: &FreePoly, order: usize, engine: &Engine) -> Result<QSymElement> {
    let mut out = QSymElement::zero(order as i32);
    let size: usize = i.iter().sum();
    if size > order {
        return Ok(out);
    }
    let mut stack: Vec<(usize, Vec<usize>, BElement)> = vec![(0, vec![], BElement::one())];
    while let Some((pos, j, q)) = stack.pop() {
        if pos == i.len() {
            let c = act(&q, r, engine)?;
            let comp: Vec<usize> = i.iter().zip(&j).map(|(a, b)| a + b).collect();
            out.add_term(Composition(comp), &c);
            continue;
        }
        let used: usize = j.iter().sum();
        for jj in 0..=(order - size - used) {
            let mut j2 = j.clone();
            j2.push(jj);
            stack.push((pos + 1, j2, q.mul(&q_poly(i[pos], jj))));
        }
    }
    Ok(out)
}

/// Coefficients `c` of `m_P (x) m_Q`.
pub type QSymTensor = BTreeMap<(Composition, Composition), FreePoly>;

/// Deconcatenation: `Delta m_I = sum_{I = P.Q} m_P (x) m_Q`.
pub fn whitney_coproduct(a: &QSymElement) -> QSymTensor {
    let mut out: QSymTensor = BTreeMap::new();
    for (i, c) in &a.terms {
        for cut in 0..=i.len() {
            let key = (Composition(i.0[..cut].to_vec()), Composition(i.0[cut..].to_vec()));
            let slot = out.entry(key.clone()).or_default();
            *slot = &*slot + c;
            if slot.is_zero() {
                out.remove(&key);
            }
        }
    }
    out
}

/// `c'_n(x_1..x_N) = sum_{i_1 < ... < i_n} c_n(x_{i_1}, ..., x_{i_n})`.
pub fn cprime(n: usize, n_vars: usize, order: usize, conv: Convention) -> Result<QSymElement> {
    assert!(n_vars >= n);
    let frame = vieta(n, order.max(n), conv);
    let small = HurContext::new(n, order as i32);
    let cn = small.realize(&frame.elementary(n, &small).truncate(order as i32));
    let big = HurContext::new(n_vars, order as i32);
    let mut sum = TSeries::zero(n_vars, order as i32);
    for pos in combinations(n_vars, n) {
        sum = sum.add(&cn.embed(n_vars, &pos));
    }
    QSymElement::from_expansion(&big.extract_left(&sum)?)
}

/// `B = X(T_2) X(T_1) X(T_2)^{-1} X(T_1)^{-1}` through total degree `order`.
///
/// Under [`BraidOrientation::Transposed`] the key `(n, m)` holds the
/// coefficient of `T_1^m T_2^n`; under `Literal` that of `T_1^n T_2^m`.
pub fn splitting_b(order: usize, conv: Convention) -> BTreeMap<(usize, usize), FreePoly> {
    assert!(order >= 3);
    let n = order as i32 + 2;
    let x1 = orientation_series(2, 0, n);
    let x2 = orientation_series(2, 1, n);
    let i1 = ts_invert(&x1, 0).expect("orientation series is invertible");
    let i2 = ts_invert(&x2, 1).expect("orientation series is invertible");
    let b = ts_mul(&ts_mul(&ts_mul(&x2, &x1), &i2), &i1);
    let mut out = BTreeMap::new();
    for (e, c) in b.terms() {
        if e.degree() > order as i32 {
            continue;
        }
        assert!(e.0[0] >= 0 && e.0[1] >= 0, "B has a negative exponent");
        let (a1, a2) = (e.0[0] as usize, e.0[1] as usize);
        let key = match conv.braid {
            BraidOrientation::Transposed => (a2, a1),
            BraidOrientation::Literal => (a1, a2),
        };
        out.insert(key, c.clone());
    }
    out
}

/// `(id (x) pi) Delta(p) - p (x) 1`, where `Delta Z_n = sum Z_p (x) Z_q` and `pi`
/// abelianizes. Empty exactly when `p` lies in the cotensor product.
pub fn cotensor_defect(p: &FreePoly) -> BTreeMap<(Word, Word), Int> {
    let mut out: BTreeMap<(Word, Word), Int> = BTreeMap::new();
    for (w, c) in p.terms() {
        let mut acc: BTreeMap<(Word, Word), Int> = BTreeMap::new();
        acc.insert((Word::empty(), Word::empty()), c.clone());
        for n in w.letters() {
            let mut next: BTreeMap<(Word, Word), Int> = BTreeMap::new();
            for ((l, r), k) in &acc {
                for q in 0..=n {
                    let l2 = if n - q > 0 { l.concat(&Word::letter(n - q)) } else { l.clone() };
                    let r2 = if q > 0 { r.concat(&Word::letter(q)) } else { r.clone() };
                    *next.entry((l2, r2)).or_default() += k;
                }
            }
            acc = next;
        }
        for ((l, r), k) in acc {
            *out.entry((l, r.sorted())).or_default() += &k;
        }
        *out.entry((w.clone(), Word::empty())).or_default() -= c;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Partition numbers `p(0..=n)`.
pub fn partition_numbers(n: usize) -> Vec<Int> {
    let mut p = vec![Int::ZERO; n + 1];
    p[0] = Int::ONE;
    for part in 1..=n {
        for m in part..=n {
            let add = p[m - part].clone();
            p[m] += &add;
        }
    }
    p
}

/// `u_w` from `sum_i p(i) u_{w-i} = dim NSym_w`.
pub fn convolution_dims(w_max: usize) -> Vec<Int> {
    let p = partition_numbers(w_max);
    let mut u: Vec<Int> = Vec::with_capacity(w_max + 1);
    for w in 0..=w_max {
        let mut val = nsym_dim(w);
        for i in 1..=w {
            val -= &(&p[i] * &u[w - i]);
        }
        assert!(!val.is_negative(), "negative dimension at weight {w}");
        u.push(val);
    }
    u
}

/// `dim NSym_w`: 1 at weight 0, `2^{w-1}` above.
pub fn nsym_dim(w: usize) -> Int {
    if w == 0 {
        Int::ONE
    } else {
        Int::from(2).pow(w as u32 - 1)
    }
}

/// Number of generators `phi_{i_1} ... phi_{i_n} Upsilon_{p,q}` with
/// `i_1 >= ... >= i_n >= p < q`, by weight.
pub fn generator_counts(w_max: usize) -> Vec<Int> {
    // g[w] counts weakly decreasing sequences with all parts >= p, by total.
    let mut counts = vec![Int::ZERO; w_max + 1];
    for p in 1..=w_max {
        for q in p + 1..=w_max {
            if p + q > w_max {
                break;
            }
            let rest = w_max - p - q;
            let mut parts = vec![Int::ZERO; rest + 1];
            parts[0] = Int::ONE;
            for part in p..=rest.max(p) {
                if part > rest {
                    break;
                }
                for m in part..=rest {
                    let add = parts[m - part].clone();
                    parts[m] += &add;
                }
            }
            for (m, c) in parts.iter().enumerate() {
                counts[p + q + m] += c;
            }
        }
    }
    counts
}

/// Graded dimensions of the free algebra on the generators of [`generator_counts`].
pub fn generator_dims(w_max: usize) -> Vec<Int> {
    let g = generator_counts(w_max);
    let mut d = vec![Int::ZERO; w_max + 1];
    d[0] = Int::ONE;
    for w in 1..=w_max {
        let mut acc = Int::ZERO;
        for i in 1..=w {
            acc += &(&g[i] * &d[w - i]);
        }
        d[w] = acc;
    }
    d
}

/// `u_w` for `w <= w_max`, checked against the generator enumeration.
pub fn graded_dims(w_max: usize) -> Result<Vec<Int>> {
    let u = convolution_dims(w_max);
    let d = generator_dims(w_max);
    if u != d {
        let w = u.iter().zip(&d).position(|(a, b)| a != b).expect("differs");
        return Err(Error::BadInput(format!("weight {w}: convolution gives {}, generators give {}", u[w], d[w])));
    }
    Ok(u)
}

/// The classical quasi-shuffle (stuffle) product of `m_a` and `m_b` over the integers.
pub fn quasi_shuffle(a: &[usize], b: &[usize]) -> BTreeMap<Composition, Int> {
    let mut out = BTreeMap::new();
    if a.is_empty() || b.is_empty() {
        out.insert(Composition([a, b].concat()), Int::ONE);
        return out;
    }
    let mut push = |head: usize, rest: BTreeMap<Composition, Int>| {
        for (c, k) in rest {
            let mut v = vec![head];
            v.extend(c.0);
            *out.entry(Composition(v)).or_insert(Int::ZERO) += &k;
        }
    };
    push(a[0], quasi_shuffle(&a[1..], b));
    push(b[0], quasi_shuffle(a, &b[1..]));
    push(a[0] + b[0], quasi_shuffle(&a[1..], &b[1..]));
    out
}

/// Commutative specialization: every coefficient replaced by its constant term.
pub fn specialize(q: &QSymElement) -> QSymElement {
    q.map_coeffs(&|c| FreePoly::constant(c.constant_term()))
}
