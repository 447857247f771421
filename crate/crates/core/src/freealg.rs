//! The free associative algebra over the integers on generators `Z1, Z2, ...`,
//! graded by `weight(Zk) = k`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::int::Int;

/// A word in the generators, letters multiplied left to right.
///
/// Words are stored inline for the lengths that occur in practice, so no
/// interning table is needed to keep hashing and comparison cheap.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(SmallVec<[u8; 16]>);

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }

    pub fn letter(k: usize) -> Word {
        Word::new(&[k])
    }

    pub fn new(letters: &[usize]) -> Word {
        Word(
            letters
                .iter()
                .map(|&k| {
                    assert!((1..=255).contains(&k), "generator index {k} out of range");
                    k as u8
                })
                .collect(),
        )
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&k| k as usize)
    }

    pub fn as_vec(&self) -> Vec<usize> {
        self.letters().collect()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Letters sorted ascending: the image of the word in the commutative quotient.
    pub fn sorted(&self) -> Word {
        let mut v = self.0.clone();
        v.sort_unstable();
        Word(v)
    }

    /// All ways to write the word as `prefix * suffix`.
    pub fn splits(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        (0..=self.0.len()).map(move |i| {
            (Word(self.0[..i].iter().copied().collect()), Word(self.0[i..].iter().copied().collect()))
        })
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then(self.0.len().cmp(&other.0.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_vec())
    }
}

/// All words of weight exactly `w` in canonical order.
pub fn basis_words(w: usize) -> Vec<Word> {
    fn rec(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Word>) {
        if rest == 0 {
            out.push(Word::new(cur));
            return;
        }
        for k in 1..=rest {
            cur.push(k);
            rec(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// A finite integer combination of words with no zero coefficients, terms
/// kept in canonical word order.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FreePoly {
    terms: Vec<(Word, Int)>,
}

impl FreePoly {
    pub fn zero() -> FreePoly {
        FreePoly { terms: Vec::new() }
    }

    pub fn one() -> FreePoly {
        FreePoly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> FreePoly {
        FreePoly::monomial(Word::empty(), c)
    }

    /// The generator `Zk`; `Z0` is the unit.
    pub fn gen(k: usize) -> FreePoly {
        if k == 0 {
            FreePoly::one()
        } else {
            FreePoly::monomial(Word::letter(k), Int::ONE)
        }
    }

    pub fn monomial(w: Word, c: Int) -> FreePoly {
        if c.is_zero() {
            FreePoly::zero()
        } else {
            FreePoly { terms: vec![(w, c)] }
        }
    }

    pub fn word(letters: &[usize]) -> FreePoly {
        FreePoly::monomial(Word::new(letters), Int::ONE)
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Int)>>(iter: I) -> FreePoly {
        let mut acc: HashMap<Word, Int> = HashMap::new();
        for (w, c) in iter {
            *acc.entry(w).or_default() += &c;
        }
        FreePoly::from_map(acc)
    }

    fn from_map(acc: HashMap<Word, Int>) -> FreePoly {
        let mut terms: Vec<(Word, Int)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        FreePoly { terms }
    }

    pub fn terms(&self) -> &[(Word, Int)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Word, Int)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Int {
        match self.terms.binary_search_by(|(t, _)| t.cmp(w)) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Int::ZERO,
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_empty() && self.terms[0].1.is_one()
    }

    pub fn constant_term(&self) -> Int {
        self.coeff(&Word::empty())
    }

    pub fn scale(&self, c: &Int) -> FreePoly {
        if c.is_zero() {
            return FreePoly::zero();
        }
        FreePoly { terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect() }
    }

    fn merge(&self, other: &FreePoly, negate: bool) -> FreePoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Greater
            } else if j == b.len() {
                Ordering::Less
            } else {
                a[i].0.cmp(&b[j].0)
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        FreePoly { terms: out }
    }

    pub fn mul_poly(&self, other: &FreePoly) -> FreePoly {
        if self.is_zero() || other.is_zero() {
            return FreePoly::zero();
        }
        if self.terms.len() == 1 && self.terms[0].0.is_empty() {
            return other.scale(&self.terms[0].1);
        }
        if other.terms.len() == 1 && other.terms[0].0.is_empty() {
            return self.scale(&other.terms[0].1);
        }
        let mut acc: HashMap<Word, Int> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                *acc.entry(w1.concat(w2)).or_default() += &(c1 * c2);
            }
        }
        FreePoly::from_map(acc)
    }

    /// Product with every term of weight above `w_max` dropped.
    pub fn mul_truncated(&self, other: &FreePoly, w_max: usize) -> FreePoly {
        let mut acc: HashMap<Word, Int> = HashMap::new();
        for (w1, c1) in &self.terms {
            let k1 = w1.weight();
            if k1 > w_max {
                break;
            }
            for (w2, c2) in &other.terms {
                if k1 + w2.weight() > w_max {
                    break;
                }
                *acc.entry(w1.concat(w2)).or_default() += &(c1 * c2);
            }
        }
        FreePoly::from_map(acc)
    }

    pub fn pow(&self, e: usize) -> FreePoly {
        let mut acc = FreePoly::one();
        for _ in 0..e {
            acc = acc.mul_poly(self);
        }
        acc
    }

    pub fn commutator(&self, other: &FreePoly) -> FreePoly {
        &self.mul_poly(other) - &other.mul_poly(self)
    }

    pub fn truncate_weight(&self, w_max: usize) -> FreePoly {
        FreePoly { terms: self.terms.iter().filter(|(w, _)| w.weight() <= w_max).cloned().collect() }
    }

    pub fn weight_component(&self, w: usize) -> FreePoly {
        FreePoly { terms: self.terms.iter().filter(|(t, _)| t.weight() == w).cloned().collect() }
    }

    /// Terms whose word length is at most `len_max`.
    pub fn truncate_length(&self, len_max: usize) -> FreePoly {
        FreePoly { terms: self.terms.iter().filter(|(w, _)| w.len() <= len_max).cloned().collect() }
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.terms.last().map(|(w, _)| w.weight())
    }

    pub fn min_weight(&self) -> Option<usize> {
        self.terms.first().map(|(w, _)| w.weight())
    }

    /// The common weight of all terms, if there is one. Zero is homogeneous of every weight.
    pub fn homogeneous_weight(&self) -> Option<usize> {
        let lo = self.min_weight()?;
        (self.max_weight() == Some(lo)).then_some(lo)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_weight().is_some()
    }

    /// Minimal word length: the largest `k` with the element in the `k`-th
    /// power of the augmentation ideal.
    pub fn ideal_filtration_degree(&self) -> Result<usize> {
        self.terms.iter().map(|(w, _)| w.len()).min().ok_or(Error::ZeroPolynomial)
    }

    /// Maps every letter through `f` and concatenates; an algebra endomorphism
    /// determined by the images of the generators.
    pub fn substitute(&self, f: &dyn Fn(usize) -> FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (w, c) in &self.terms {
            let mut p = FreePoly::constant(c.clone());
            for k in w.letters() {
                p = p.mul_poly(&f(k));
            }
            out = &out + &p;
        }
        out
    }

    /// Text form with a custom letter renderer.
    pub fn fmt_with(&self, letter: &dyn Fn(usize) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let letters: Vec<String> = w.letters().map(letter).collect();
            if letters.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&letters.join("*"));
            }
        }
        s
    }

    pub fn to_latex(&self) -> String {
        latex_with(self, "Z")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.terms.iter().map(|(w, c)| json!({"c": c.to_string(), "w": w.as_vec()})).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &Value) -> Result<FreePoly> {
        let terms = v
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"terms\" array".into()))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let c: Int = t
                .get("c")
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Parse("term without \"c\"".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad coefficient: {e}")))?;
            let w = t
                .get("w")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse("term without \"w\"".into()))?
                .iter()
                .map(|x| x.as_u64().filter(|&k| (1..=255).contains(&k)).map(|k| k as usize))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::Parse("bad letter".into()))?;
            out.push((Word::new(&w), c));
        }
        Ok(FreePoly::from_terms(out))
    }

    /// Parses the text form. Accepts `Zk^e` powers, `1` for the empty word and
    /// arbitrary whitespace.
    pub fn parse(s: &str) -> Result<FreePoly> {
        parse_with(s, "Z")
    }
}

pub(crate) fn latex_with(p: &FreePoly, sym: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (w, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if w.is_empty() || !abs.is_one() {
            s.push_str(&abs.to_string());
        }
        let letters = w.as_vec();
        let mut k = 0;
        while k < letters.len() {
            let mut e = 1;
            while k + e < letters.len() && letters[k + e] == letters[k] {
                e += 1;
            }
            s.push_str(&format!("{sym}_{{{}}}", letters[k]));
            if e > 1 {
                s.push_str(&format!("^{{{e}}}"));
            }
            k += e;
        }
    }
    s
}

pub(crate) fn parse_with(s: &str, sym: &str) -> Result<FreePoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut terms = Vec::new();
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = Int::ONE;
        if let Some(r) = rest.strip_prefix('-') {
            sign = Int::from(-1);
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if !first {
            return Err(Error::Parse(format!("expected sign before {rest:?}")));
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (term, r) = rest.split_at(end);
        rest = r;
        if term.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        let mut coeff = sign;
        let mut letters = Vec::new();
        for factor in term.split('*') {
            if let Some(body) = factor.strip_prefix(sym) {
                let (idx, exp) = match body.split_once('^') {
                    Some((i, e)) => (i, e.parse::<usize>().map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?),
                    None => (body, 1),
                };
                let k: usize = idx.parse().map_err(|_| Error::Parse(format!("bad generator {factor:?}")))?;
                if !(1..=255).contains(&k) {
                    return Err(Error::Parse(format!("generator index out of range in {factor:?}")));
                }
                letters.extend(std::iter::repeat(k).take(exp));
            } else {
                let c: Int = factor.parse().map_err(|_| Error::Parse(format!("bad factor {factor:?}")))?;
                coeff = &coeff * &c;
            }
        }
        terms.push((Word::new(&letters), coeff));
    }
    Ok(FreePoly::from_terms(terms))
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with(&|k| format!("Z{k}")))
    }
}

impl fmt::Debug for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        self.merge(rhs, false)
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        self.merge(rhs, true)
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        self.mul_poly(rhs)
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        FreePoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }
}

impl Add for FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: FreePoly) -> FreePoly {
        &self + &rhs
    }
}

impl Sub for FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: FreePoly) -> FreePoly {
        &self - &rhs
    }
}

impl Mul for FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: FreePoly) -> FreePoly {
        &self * &rhs
    }
}

impl Neg for FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        -&self
    }
}

impl std::iter::Sum for FreePoly {
    fn sum<I: Iterator<Item = FreePoly>>(iter: I) -> FreePoly {
        let mut acc: HashMap<Word, Int> = HashMap::new();
        for p in iter {
            for (w, c) in p.terms {
                *acc.entry(w).or_default() += &c;
            }
        }
        FreePoly::from_map(acc)
    }
}

/// Accumulates sums of products without intermediate normalization.
#[derive(Default, Clone)]
pub struct PolyAcc(HashMap<Word, Int>);

impl PolyAcc {
    pub fn new() -> PolyAcc {
        PolyAcc::default()
    }

    pub fn add(&mut self, p: &FreePoly) {
        for (w, c) in &p.terms {
            *self.0.entry(w.clone()).or_default() += c;
        }
    }

    pub fn add_scaled(&mut self, p: &FreePoly, k: &Int) {
        for (w, c) in &p.terms {
            *self.0.entry(w.clone()).or_default() += &(c * k);
        }
    }

    /// Adds `k * a * b`.
    pub fn add_product(&mut self, a: &FreePoly, b: &FreePoly, k: &Int) {
        for (w1, c1) in &a.terms {
            let c1k = c1 * k;
            for (w2, c2) in &b.terms {
                *self.0.entry(w1.concat(w2)).or_default() += &(&c1k * c2);
            }
        }
    }

    pub fn finish(self) -> FreePoly {
        FreePoly::from_map(self.0)
    }
}

/// Shorthand for parsing trusted literals; panics on malformed input.
pub fn fp(s: &str) -> FreePoly {
    FreePoly::parse(s).unwrap_or_else(|e| panic!("{e}: {s:?}"))
}
