//! The Hopf algebra `B = Z<phi_1, phi_2, ...>` acting on the coefficient ring,
//! with the coproduct `Delta(phi_n) = sum_{p+q=n} phi_p (x) Q_q^{(1+p)}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::error::Result;
use crate::fgl::Engine;
use crate::freealg::{latex_with, FreePoly, PolyAcc, Word};
use crate::int::Int;

/// An integer combination of words in the `phi` alphabet; `phi_0` is the unit.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct BElement(pub FreePoly);

impl BElement {
    pub fn zero() -> BElement {
        BElement(FreePoly::zero())
    }

    pub fn one() -> BElement {
        BElement(FreePoly::one())
    }

    pub fn phi(k: usize) -> BElement {
        BElement(FreePoly::gen(k))
    }

    pub fn word(w: &[usize]) -> BElement {
        BElement(FreePoly::word(&w.iter().copied().filter(|&k| k > 0).collect::<Vec<_>>()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn terms(&self) -> &[(Word, Int)] {
        self.0.terms()
    }

    pub fn mul(&self, other: &BElement) -> BElement {
        BElement(&self.0 * &other.0)
    }

    pub fn add(&self, other: &BElement) -> BElement {
        BElement(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &BElement) -> BElement {
        BElement(&self.0 - &other.0)
    }

    pub fn scale(&self, k: &Int) -> BElement {
        BElement(self.0.scale(k))
    }

    pub fn parse(s: &str) -> Result<BElement> {
        crate::freealg::parse_with(s, "phi").map(BElement)
    }

    pub fn to_latex(&self) -> String {
        latex_with(&self.0, "\\varphi")
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.0.to_json();
        v["alphabet"] = json!("phi");
        v
    }
}

impl fmt::Display for BElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.fmt_with(&|k| format!("phi{k}")))
    }
}

impl fmt::Debug for BElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of the `arity`-fold tensor power of `B`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BTensor {
    pub arity: usize,
    pub terms: BTreeMap<Vec<Word>, Int>,
}

impl BTensor {
    pub fn zero(arity: usize) -> BTensor {
        BTensor { arity, terms: BTreeMap::new() }
    }

    pub fn unit(arity: usize) -> BTensor {
        let mut t = BTensor::zero(arity);
        t.add_term(vec![Word::empty(); arity], &Int::ONE);
        t
    }

    /// `a (x) b`.
    pub fn pure(parts: &[&BElement]) -> BTensor {
        let mut t = BTensor::unit(0);
        for p in parts {
            t = t.outer(&BTensor::from_element(p));
        }
        t
    }

    pub fn from_element(b: &BElement) -> BTensor {
        let mut t = BTensor::zero(1);
        for (w, c) in b.terms() {
            t.add_term(vec![w.clone()], c);
        }
        t
    }

    pub fn add_term(&mut self, key: Vec<Word>, c: &Int) {
        assert_eq!(key.len(), self.arity);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn add(&self, other: &BTensor) -> BTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &BTensor) -> BTensor {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), &-c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Product in the tensor power algebra (slotwise concatenation).
    pub fn mul(&self, other: &BTensor) -> BTensor {
        assert_eq!(self.arity, other.arity);
        let mut out = BTensor::zero(self.arity);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key = k1.iter().zip(k2).map(|(a, b)| a.concat(b)).collect();
                out.add_term(key, &(c1 * c2));
            }
        }
        out
    }

    /// `self (x) other`.
    pub fn outer(&self, other: &BTensor) -> BTensor {
        let mut out = BTensor::zero(self.arity + other.arity);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut key = k1.clone();
                key.extend(k2.iter().cloned());
                out.add_term(key, &(c1 * c2));
            }
        }
        out
    }

    /// Replaces slot `i` by the tensor `f(word)` of arity `m`.
    pub fn apply_slot(&self, i: usize, m: usize, f: &dyn Fn(&Word) -> BTensor) -> BTensor {
        let mut out = BTensor::zero(self.arity - 1 + m);
        for (k, c) in &self.terms {
            let image = f(&k[i]);
            assert_eq!(image.arity, m);
            for (ki, ci) in &image.terms {
                let mut key: Vec<Word> = k[..i].to_vec();
                key.extend(ki.iter().cloned());
                key.extend(k[i + 1..].iter().cloned());
                out.add_term(key, &(c * ci));
            }
        }
        out
    }

    /// Multiplies slots `i` and `i+1` together.
    pub fn multiply_slots(&self, i: usize) -> BTensor {
        let mut out = BTensor::zero(self.arity - 1);
        for (k, c) in &self.terms {
            let mut key: Vec<Word> = k[..i].to_vec();
            key.push(k[i].concat(&k[i + 1]));
            key.extend(k[i + 2..].iter().cloned());
            out.add_term(key, c);
        }
        out
    }

    /// Collapses a 1-fold tensor to an element.
    pub fn to_element(&self) -> BElement {
        assert_eq!(self.arity, 1);
        BElement(FreePoly::from_terms(self.terms.iter().map(|(k, c)| (k[0].clone(), c.clone()))))
    }
}

impl fmt::Display for BTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let word = |w: &Word| {
            if w.is_empty() {
                "1".to_string()
            } else {
                w.letters().map(|k| format!("phi{k}")).collect::<Vec<_>>().join("*")
            }
        };
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                f.write_str(if neg { " - " } else { " + " })?;
            } else if neg {
                f.write_str("-")?;
            }
            if !c.abs().is_one() {
                write!(f, "{}*", c.abs())?;
            }
            let parts: Vec<String> = k.iter().map(word).collect();
            write!(f, "{}", parts.join(" (x) "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `Q_j^{(n)} = sum over weak compositions (i_1..i_n) of j of phi_{i_1} ... phi_{i_n}`.
pub fn q_poly(n: usize, j: usize) -> BElement {
    fn rec(parts: usize, rest: usize, cur: &mut Vec<usize>, out: &mut Vec<(Word, Int)>) {
        if parts == 0 {
            if rest == 0 {
                out.push((Word::new(cur), Int::ONE));
            }
            return;
        }
        for i in 0..=rest {
            if i > 0 {
                cur.push(i);
            }
            rec(parts - 1, rest - i, cur, out);
            if i > 0 {
                cur.pop();
            }
        }
    }
    let mut terms = Vec::new();
    rec(n, j, &mut Vec::new(), &mut terms);
    BElement(FreePoly::from_terms(terms))
}

/// Which index offset the coproduct uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoproductVariant {
    /// `Delta(phi_n) = sum phi_p (x) Q_q^{(1+p)}`.
    Corrected,
    /// `Delta(phi_n) = sum phi_p (x) Q_q^{(p)}`; kept for comparison, fails the counit axiom.
    AsPrinted,
}

pub fn coproduct_gen(n: usize, variant: CoproductVariant) -> BTensor {
    let mut out = BTensor::zero(2);
    for p in 0..=n {
        let q = n - p;
        let left = BElement::phi(p);
        let right = match variant {
            CoproductVariant::Corrected => q_poly(1 + p, q),
            CoproductVariant::AsPrinted => q_poly(p, q),
        };
        out = out.add(&BTensor::pure(&[&left, &right]));
    }
    out
}

fn coproduct_word(w: &Word, variant: CoproductVariant) -> BTensor {
    let mut acc = BTensor::unit(2);
    for k in w.letters() {
        acc = acc.mul(&coproduct_gen(k, variant));
    }
    acc
}

/// Multiplicative extension of the coproduct.
pub fn coproduct(b: &BElement, variant: CoproductVariant) -> BTensor {
    let mut out = BTensor::zero(2);
    for (w, c) in b.terms() {
        for (k, d) in coproduct_word(w, variant).terms {
            out.add_term(k, &(c * &d));
        }
    }
    out
}

pub fn counit(b: &BElement) -> Int {
    b.0.constant_term()
}

/// Antipode on generators by `chi(phi_n) = -sum_{p<n} chi(phi_p) Q_{n-p}^{(1+p)}`,
/// extended anti-multiplicatively.
pub struct Antipode {
    gens: Vec<BElement>,
}

impl Antipode {
    pub fn new(max_weight: usize) -> Antipode {
        let mut gens = vec![BElement::one()];
        for n in 1..=max_weight {
            let mut acc = BElement::zero();
            for (p, sp) in gens.iter().enumerate() {
                acc = acc.sub(&sp.mul(&q_poly(1 + p, n - p)));
            }
            gens.push(acc);
        }
        Antipode { gens }
    }

    pub fn gen(&self, n: usize) -> &BElement {
        &self.gens[n]
    }

    pub fn apply(&self, b: &BElement) -> BElement {
        let mut out = BElement::zero();
        for (w, c) in b.terms() {
            let mut acc = BElement::one();
            for k in w.letters() {
                acc = self.gens[k].mul(&acc);
            }
            out = out.add(&acc.scale(c));
        }
        out
    }
}

pub fn antipode(b: &BElement) -> BElement {
    let w = b.terms().iter().map(|(w, _)| w.weight()).max().unwrap_or(0);
    Antipode::new(w).apply(b)
}

/// The action of `B` on the coefficient ring.
pub fn act(b: &BElement, a: &FreePoly, engine: &Engine) -> Result<FreePoly> {
    let mut acc = PolyAcc::new();
    for (w, c) in b.terms() {
        acc.add_scaled(&engine.phi_word(&w.as_vec(), a)?, c);
    }
    Ok(acc.finish())
}

/// `phi_n(a b) = sum over Delta(phi_n) = sum u (x) v of act(u, a) act(v, b)`.
pub fn module_algebra_holds(
    n: usize,
    a: &FreePoly,
    b: &FreePoly,
    variant: CoproductVariant,
    engine: &Engine,
) -> Result<bool> {
    let lhs = engine.phi(n, &(a * b))?;
    let mut acc = PolyAcc::new();
    for (k, c) in coproduct_gen(n, variant).terms {
        let u = act(&BElement(FreePoly::monomial(k[0].clone(), Int::ONE)), a, engine)?;
        let v = act(&BElement(FreePoly::monomial(k[1].clone(), Int::ONE)), b, engine)?;
        acc.add_product(&u, &v, &c);
    }
    Ok(lhs == acc.finish())
}

/// A combination of `B`-words tensored with powers of `x`.
pub type Coaction = BTreeMap<(Word, usize), Int>;

fn coaction_add(t: &mut Coaction, key: (Word, usize), c: &Int) {
    let slot = t.entry(key.clone()).or_default();
    *slot += c;
    if slot.is_zero() {
        t.remove(&key);
    }
}

/// `delta(x)^n = (sum_k phi_k (x) x^{1+k})^n`, keeping x-degrees up to `max_deg`.
pub fn coaction_power(n: usize, max_deg: usize) -> Coaction {
    let mut acc: Coaction = BTreeMap::new();
    acc.insert((Word::empty(), 0), Int::ONE);
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for ((w, d), c) in &acc {
            if d + 1 > max_deg {
                continue;
            }
            for k in 0..=max_deg - d - 1 {
                let w2 = if k == 0 { w.clone() } else { w.concat(&Word::letter(k)) };
                coaction_add(&mut next, (w2, d + 1 + k), c);
            }
        }
        acc = next;
    }
    acc
}

/// Checks `delta(x^n) = sum_j Q_j^{(n)} (x) x^{n+j}` through x-degree `max_deg`.
pub fn comodule_power_holds(n: usize, max_deg: usize) -> bool {
    let lhs = coaction_power(n, max_deg);
    let mut rhs: Coaction = BTreeMap::new();
    for d in n..=max_deg {
        for (w, c) in q_poly(n, d - n).terms() {
            coaction_add(&mut rhs, (w.clone(), d), c);
        }
    }
    lhs == rhs
}

/// Checks `(Delta (x) id) delta(x) = (id (x) delta) delta(x)` through x-degree `max_deg`.
pub fn coaction_coassociative(variant: CoproductVariant, max_deg: usize) -> bool {
    type Triple = BTreeMap<(Word, Word, usize), Int>;
    let add = |t: &mut Triple, key: (Word, Word, usize), c: &Int| {
        let slot = t.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            t.remove(&key);
        }
    };
    let mut lhs: Triple = BTreeMap::new();
    let mut rhs: Triple = BTreeMap::new();
    for n in 0..max_deg {
        for (k, c) in coproduct_gen(n, variant).terms {
            add(&mut lhs, (k[0].clone(), k[1].clone(), 1 + n), &c);
        }
        let outer = if n == 0 { Word::empty() } else { Word::letter(n) };
        for ((w, d), c) in coaction_power(1 + n, max_deg) {
            add(&mut rhs, (outer.clone(), w, d), &c);
        }
    }
    lhs == rhs
}

/// `(Delta (x) id) Delta(phi_n) = (id (x) Delta) Delta(phi_n)`.
pub fn coassociative(n: usize, variant: CoproductVariant) -> bool {
    let d = coproduct_gen(n, variant);
    let delta = |w: &Word| coproduct_word(w, variant);
    d.apply_slot(0, 2, &delta) == d.apply_slot(1, 2, &delta)
}

/// `(eps (x) id) Delta(phi_n) = phi_n = (id (x) eps) Delta(phi_n)`.
pub fn counital(n: usize, variant: CoproductVariant) -> bool {
    let d = coproduct_gen(n, variant);
    let eps = |w: &Word| {
        let mut t = BTensor::zero(0);
        if w.is_empty() {
            t.add_term(vec![], &Int::ONE);
        }
        t
    };
    let target = BTensor::from_element(&BElement::phi(n));
    d.apply_slot(0, 0, &eps) == target && d.apply_slot(1, 0, &eps) == target
}

/// `m(chi (x) id) Delta(phi_n) = eps(phi_n) = m(id (x) chi) Delta(phi_n)`.
pub fn antipode_holds(n: usize, antipode: &Antipode, variant: CoproductVariant) -> bool {
    let d = coproduct_gen(n, variant);
    let chi = |w: &Word| BTensor::from_element(&antipode.apply(&BElement(FreePoly::monomial(w.clone(), Int::ONE))));
    let unit = BTensor::from_element(&BElement::one().scale(&counit(&BElement::phi(n))));
    d.apply_slot(0, 1, &chi).multiply_slots(0) == unit && d.apply_slot(1, 1, &chi).multiply_slots(0) == unit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hur::Convention;

    fn b(s: &str) -> BElement {
        BElement::parse(s).unwrap()
    }

    #[test]
    fn q_polynomials() {
        for n in 0..5 {
            assert_eq!(q_poly(n, 0), BElement::one());
        }
        assert_eq!(q_poly(0, 2), BElement::zero());
        assert_eq!(q_poly(2, 1), b("2*phi1"));
        assert_eq!(q_poly(2, 2), b("phi1^2 + 2*phi2"));
    }

    #[test]
    fn low_coproducts() {
        let one = BElement::one();
        let p1 = BElement::phi(1);
        let p2 = BElement::phi(2);
        let expect1 = BTensor::pure(&[&p1, &one]).add(&BTensor::pure(&[&one, &p1]));
        assert_eq!(coproduct_gen(1, CoproductVariant::Corrected), expect1);
        let expect2 = BTensor::pure(&[&p2, &one])
            .add(&BTensor::pure(&[&one, &p2]))
            .add(&BTensor::pure(&[&p1, &p1]).add(&BTensor::pure(&[&p1, &p1])));
        assert_eq!(coproduct_gen(2, CoproductVariant::Corrected), expect2);
    }

    #[test]
    fn counit_values() {
        assert_eq!(counit(&BElement::one()), Int::ONE);
        assert_eq!(counit(&BElement::phi(3)), Int::ZERO);
        assert_eq!(counit(&b("phi1*phi2 + 5")), Int::from(5));
    }

    #[test]
    fn antipode_values() {
        assert_eq!(antipode(&BElement::one()), BElement::one());
        assert_eq!(antipode(&BElement::phi(1)), b("-phi1"));
        assert_eq!(antipode(&BElement::phi(2)), b("-phi2 + 2*phi1^2"));
    }

    #[test]
    fn action_matches_concrete_phi() {
        let e = Engine::new(8, Convention::default());
        let z2 = FreePoly::gen(2);
        assert_eq!(act(&BElement::one(), &z2, &e).unwrap(), z2);
        assert_eq!(act(&BElement::phi(1), &z2, &e).unwrap(), crate::freealg::fp("Z1*Z2 - Z2*Z1"));
    }

    #[test]
    fn comodule_and_offset() {
        for n in 1..=5 {
            assert!(comodule_power_holds(n, 9));
        }
        assert!(coaction_coassociative(CoproductVariant::Corrected, 8));
        assert!(!coaction_coassociative(CoproductVariant::AsPrinted, 8));
    }

    #[test]
    fn hopf_axioms() {
        let chi = Antipode::new(6);
        for n in 0..=6 {
            assert!(coassociative(n, CoproductVariant::Corrected), "coassociativity {n}");
            assert!(counital(n, CoproductVariant::Corrected), "counit {n}");
            assert!(antipode_holds(n, &chi, CoproductVariant::Corrected), "antipode {n}");
        }
        assert!(!counital(1, CoproductVariant::AsPrinted));
    }

    #[test]
    fn display() {
        let t = coproduct_gen(1, CoproductVariant::Corrected);
        assert_eq!(t.to_string(), "1 (x) phi1 + phi1 (x) 1");
        assert_eq!(b("2*phi1*phi2 - phi3").to_string(), "-phi3 + 2*phi1*phi2");
    }
}
