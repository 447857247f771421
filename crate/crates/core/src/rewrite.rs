//! Exact integer linear algebra on graded components: Hermite normal forms,
//! symbol dictionaries, solving for integer expressions of a coefficient, and
//! the relation and basis checks built on them.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fgl::Engine;
use crate::freealg::{FreePoly, PolyAcc, Word};
use crate::int::Int;
use crate::symfun::{convolution_dims, nsym_dim, partition_numbers};

/// Row Hermite normal form `H = U A` with `U` unimodular.
#[derive(Clone, Debug)]
pub struct Hnf {
    pub h: Vec<Vec<Int>>,
    /// Present when requested.
    pub u: Option<Vec<Vec<Int>>>,
    /// `(row, column)` of each pivot; rows `rank..` of `h` are zero.
    pub pivots: Vec<(usize, usize)>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn row_axpy(rows: &mut [Vec<Int>], target: usize, src: usize, q: &Int) {
    if q.is_zero() {
        return;
    }
    let (t, s) = if target < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(target);
        (&mut b[0], &a[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= &(q * y);
        }
    }
}

fn row_neg(row: &mut [Int]) {
    for x in row.iter_mut() {
        *x = -&*x;
    }
}

/// Computes the row Hermite normal form of `a` (pivots positive, entries above a
/// pivot reduced into `[0, pivot)`, entries below zero).
pub fn hnf(a: &[Vec<Int>], with_transform: bool) -> Hnf {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut h: Vec<Vec<Int>> = a.to_vec();
    let mut u: Option<Vec<Vec<Int>>> = with_transform.then(|| {
        (0..m).map(|i| (0..m).map(|j| if i == j { Int::ONE } else { Int::ZERO }).collect()).collect()
    });
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        loop {
            let Some(best) = (r..m)
                .filter(|&i| !h[i][j].is_zero())
                .min_by(|&x, &y| h[x][j].abs().cmp(&h[y][j].abs()).then(x.cmp(&y)))
            else {
                break;
            };
            if best != r {
                h.swap(best, r);
                if let Some(u) = u.as_mut() {
                    u.swap(best, r);
                }
            }
            let mut cleared = true;
            for i in r + 1..m {
                if h[i][j].is_zero() {
                    continue;
                }
                let (q, rem) = h[i][j].div_rem_euclid(&h[r][j]);
                row_axpy(&mut h, i, r, &q);
                if let Some(u) = u.as_mut() {
                    row_axpy(u, i, r, &q);
                }
                if !rem.is_zero() {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if h.get(r).map_or(true, |row| row[j].is_zero()) {
            continue;
        }
        if h[r][j].is_negative() {
            row_neg(&mut h[r]);
            if let Some(u) = u.as_mut() {
                row_neg(&mut u[r]);
            }
        }
        for i in 0..r {
            let (q, _) = h[i][j].div_rem_euclid(&h[r][j]);
            row_axpy(&mut h, i, r, &q);
            if let Some(u) = u.as_mut() {
                row_axpy(u, i, r, &q);
            }
        }
        pivots.push((r, j));
        r += 1;
    }
    Hnf { h, u, pivots }
}

/// Exact determinant by fraction-free elimination.
pub fn determinant(a: &[Vec<Int>]) -> Int {
    let n = a.len();
    let mut m = a.to_vec();
    let mut sign = Int::ONE;
    let mut prev = Int::ONE;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Int::ZERO;
        };
        if p != k {
            m.swap(p, k);
            sign = -&sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = v.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    &sign * &m[n - 1][n - 1]
}

/// A named coefficient-ring element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub poly: FreePoly,
    pub weight: usize,
}

/// An ordered list of named, weight-homogeneous elements.
#[derive(Clone, Debug, Default)]
pub struct SymbolDictionary {
    pub recipe: String,
    pub entries: Vec<Symbol>,
}

fn phi_name(ks: &[usize], inner: &str) -> String {
    if ks.is_empty() {
        inner.to_string()
    } else {
        let idx: Vec<String> = ks.iter().map(|k| k.to_string()).collect();
        format!("phi[{}]({inner})", idx.join(","))
    }
}

/// Weakly decreasing sequences with parts `>= min_part` summing to `total`.
fn decreasing_sequences(total: usize, min_part: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (min..=max.min(rest)).rev() {
            cur.push(k);
            rec(rest - k, k, min, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if min_part > 0 {
        rec(total, total, min_part, &mut Vec::new(), &mut out);
    }
    out
}

/// Partitions of `w` as exponent vectors `(a_1, .., a_w)` with `sum i a_i = w`.
fn x_exponents(w: usize) -> Vec<Vec<usize>> {
    decreasing_sequences(w, 1)
        .into_iter()
        .map(|parts| {
            let mut a = vec![0; w + 1];
            for p in parts {
                a[p] += 1;
            }
            a
        })
        .collect()
}

impl SymbolDictionary {
    pub fn new(recipe: &str) -> SymbolDictionary {
        SymbolDictionary { recipe: recipe.to_string(), entries: Vec::new() }
    }

    pub fn push(&mut self, name: String, poly: FreePoly) -> Result<()> {
        let weight = poly
            .homogeneous_weight()
            .ok_or_else(|| Error::BadInput(format!("dictionary entry {name} is zero or not homogeneous")))?;
        self.entries.push(Symbol { name, poly, weight });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn of_weight(&self, w: usize) -> impl Iterator<Item = (usize, &Symbol)> {
        self.entries.iter().enumerate().filter(move |(_, s)| s.weight == w)
    }

    /// `phi_{i_1} ... phi_{i_n} Upsilon_{p,q}` with `i_1 >= ... >= i_n >= p < q`, weight `<= w_max`.
    pub fn upsilon_generators(engine: &Engine, w_max: usize) -> Result<SymbolDictionary> {
        let mut d = SymbolDictionary::new("upsilon generators");
        for w in 3..=w_max {
            for p in 1..w {
                for q in p + 1..w {
                    if p + q > w {
                        break;
                    }
                    let ups = engine.upsilon(p, q)?;
                    if ups.is_zero() {
                        continue;
                    }
                    for ks in decreasing_sequences(w - p - q, p) {
                        let poly = engine.phi_word(&ks, &ups)?;
                        d.push(phi_name(&ks, &format!("Ups[{p},{q}]")), poly)?;
                    }
                }
            }
        }
        Ok(d)
    }

    /// All ordered products of generators (including the empty product `1`).
    pub fn generator_words(engine: &Engine, w_max: usize) -> Result<SymbolDictionary> {
        let gens = SymbolDictionary::upsilon_generators(engine, w_max)?;
        let mut by_weight: Vec<Vec<(String, FreePoly)>> = vec![Vec::new(); w_max + 1];
        by_weight[0].push(("1".into(), FreePoly::one()));
        for w in 1..=w_max {
            let mut cur = Vec::new();
            for g in &gens.entries {
                if g.weight > w {
                    continue;
                }
                for (name, poly) in &by_weight[w - g.weight] {
                    let n = if name == "1" { g.name.clone() } else { format!("{}*{name}", g.name) };
                    cur.push((n, &g.poly * poly));
                }
            }
            by_weight[w] = cur;
        }
        let mut d = SymbolDictionary::new("generator words");
        for level in by_weight {
            for (n, p) in level {
                d.push(n, p)?;
            }
        }
        Ok(d)
    }

    /// `X_1^{a_1} ... X_n^{a_n}` of weight `<= w_max` (including `1`).
    pub fn x_monomials(engine: &Engine, w_max: usize) -> Result<SymbolDictionary> {
        let xs: Vec<FreePoly> = (0..=w_max)
            .map(|n| if n == 0 { Ok(FreePoly::one()) } else { engine.generator_x(n) })
            .collect::<Result<_>>()?;
        let mut d = SymbolDictionary::new("X monomials");
        d.push("1".into(), FreePoly::one())?;
        for w in 1..=w_max {
            for a in x_exponents(w) {
                let mut poly = FreePoly::one();
                let mut name = Vec::new();
                for (i, &e) in a.iter().enumerate().skip(1) {
                    if e > 0 {
                        poly = &poly * &xs[i].pow(e);
                        name.push(if e == 1 { format!("X{i}") } else { format!("X{i}^{e}") });
                    }
                }
                d.push(name.join("*"), poly)?;
            }
        }
        Ok(d)
    }

    /// Generator words times X-monomials, weight `<= w_max`.
    pub fn module_basis(engine: &Engine, w_max: usize) -> Result<SymbolDictionary> {
        let ys = SymbolDictionary::generator_words(engine, w_max)?;
        let xs = SymbolDictionary::x_monomials(engine, w_max)?;
        let mut d = SymbolDictionary::new("generator words times X monomials");
        for w in 0..=w_max {
            for i in 0..=w {
                for (_, y) in ys.of_weight(i) {
                    for (_, x) in xs.of_weight(w - i) {
                        let name = match (y.name.as_str(), x.name.as_str()) {
                            ("1", xn) => xn.to_string(),
                            (yn, "1") => yn.to_string(),
                            (yn, xn) => format!("{yn}*{xn}"),
                        };
                        d.push(name, &y.poly * &x.poly)?;
                    }
                }
            }
        }
        Ok(d)
    }

    pub fn extend(&mut self, other: &SymbolDictionary) {
        self.entries.extend(other.entries.iter().cloned());
    }
}

/// An integer combination of dictionary entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expression {
    /// `(entry index, coefficient)`, nonzero coefficients in dictionary order.
    pub coeffs: Vec<(usize, Int)>,
    /// False when the dictionary entries of this weight are linearly dependent.
    pub unique: bool,
}

impl Expression {
    pub fn expand(&self, dict: &SymbolDictionary) -> FreePoly {
        let mut acc = PolyAcc::new();
        for (i, c) in &self.coeffs {
            acc.add_scaled(&dict.entries[*i].poly, c);
        }
        acc.finish()
    }

    pub fn display(&self, dict: &SymbolDictionary) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (i, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            if k > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let name = &dict.entries[*i].name;
            if c.abs().is_one() {
                s.push_str(name);
            } else {
                s.push_str(&format!("{}*{name}", c.abs()));
            }
        }
        s
    }

    pub fn to_json(&self, dict: &SymbolDictionary) -> Value {
        json!({
            "unique": self.unique,
            "terms": self.coeffs.iter().map(|(i, c)| json!({"symbol": dict.entries[*i].name, "c": c.to_string()})).collect::<Vec<_>>(),
        })
    }
}

/// Solves `target = sum c_i entry_i` over the integers using entries of the target's weight.
///
/// When the solution is not unique, the returned one is reduced modulo the
/// Hermite basis of the relation lattice, which makes the coefficients of the
/// earliest dictionary entries nonnegative and as small as possible.
pub fn express(target: &FreePoly, dict: &SymbolDictionary) -> Result<Expression> {
    if target.is_zero() {
        return Ok(Expression { coeffs: Vec::new(), unique: true });
    }
    let w = target
        .homogeneous_weight()
        .ok_or_else(|| Error::BadInput("target is not weight-homogeneous".into()))?;
    let idx: Vec<usize> = dict.of_weight(w).map(|(i, _)| i).collect();
    let mut columns: HashMap<Word, usize> = HashMap::new();
    let mut words: Vec<Word> = Vec::new();
    for p in idx.iter().map(|&i| &dict.entries[i].poly).chain(std::iter::once(target)) {
        for (wd, _) in p.terms() {
            columns.entry(wd.clone()).or_insert_with(|| {
                words.push(wd.clone());
                words.len() - 1
            });
        }
    }
    let to_row = |p: &FreePoly| {
        let mut row = vec![Int::ZERO; words.len()];
        for (wd, c) in p.terms() {
            row[columns[wd]] = c.clone();
        }
        row
    };
    let a: Vec<Vec<Int>> = idx.iter().map(|&i| to_row(&dict.entries[i].poly)).collect();
    let form = hnf(&a, true);
    let u = form.u.as_ref().expect("transform requested");
    let mut t = to_row(target);
    let mut sol = vec![Int::ZERO; idx.len()];
    for &(r, j) in &form.pivots {
        if t[j].is_zero() {
            continue;
        }
        let (q, rem) = t[j].div_rem_euclid(&form.h[r][j]);
        if !rem.is_zero() {
            return Err(Error::NotInSpanLattice(format!(
                "coefficient {} of {} is not divisible by the lattice pivot {}",
                t[j],
                FreePoly::monomial(words[j].clone(), Int::ONE),
                form.h[r][j]
            )));
        }
        for (x, y) in t.iter_mut().zip(&form.h[r]) {
            *x -= &(&q * y);
        }
        for (s, y) in sol.iter_mut().zip(&u[r]) {
            *s += &(&q * y);
        }
    }
    if let Some(j) = t.iter().position(|c| !c.is_zero()) {
        return Err(Error::NotInSpanLattice(format!(
            "word {} lies outside the span of {} dictionary entries of weight {w}",
            FreePoly::monomial(words[j].clone(), Int::ONE),
            idx.len()
        )));
    }
    let kernel: Vec<Vec<Int>> = u[form.rank()..].to_vec();
    let unique = kernel.is_empty();
    if !unique {
        let k = hnf(&kernel, false);
        for &(r, j) in &k.pivots {
            let (q, _) = sol[j].div_rem_euclid(&k.h[r][j]);
            for (s, y) in sol.iter_mut().zip(&k.h[r]) {
                *s -= &(&q * y);
            }
        }
    }
    let coeffs = idx.iter().zip(sol).filter(|(_, c)| !c.is_zero()).map(|(&i, c)| (i, c)).collect();
    Ok(Expression { coeffs, unique })
}

/// Evaluates a symbolic expression over `Ups[p,q]`, `phi[i,..](..)`, `X<n>`, `Z<n>` and integers.
///
/// `phi[i_1,..,i_n](a)` applies `phi_{i_n}` first. Products are written with `*`
/// and powers with `^`.
pub fn eval_symbolic(s: &str, engine: &Engine) -> Result<FreePoly> {
    let mut p = SymParser { s: s.as_bytes(), pos: 0, engine };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct SymParser<'a> {
    s: &'a [u8],
    pos: usize,
    engine: &'a Engine,
}

impl SymParser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of {:?}", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {lit:?}")))
        }
    }

    fn number(&mut self) -> Result<Int> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii").parse().map_err(|_| self.err("bad number"))
    }

    fn index(&mut self) -> Result<usize> {
        self.number()?.to_i64().map(|k| k as usize).ok_or_else(|| self.err("index too large"))
    }

    fn expr(&mut self) -> Result<FreePoly> {
        let mut acc = if self.eat("-") { -&self.term()? } else { self.term()? };
        loop {
            if self.eat("+") {
                acc = &acc + &self.term()?;
            } else if self.eat("-") {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FreePoly> {
        let mut acc = self.power()?;
        while self.eat("*") {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<FreePoly> {
        let base = self.atom()?;
        if self.eat("^") {
            let e = self.index()?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FreePoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(")")?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => Ok(FreePoly::constant(self.number()?)),
            _ if self.eat("Ups[") => {
                let p = self.index()?;
                self.expect(",")?;
                let q = self.index()?;
                self.expect("]")?;
                self.engine.upsilon(p, q)
            }
            _ if self.eat("phi[") => {
                let mut ks = vec![self.index()?];
                while self.eat(",") {
                    ks.push(self.index()?);
                }
                self.expect("]")?;
                self.expect("(")?;
                let a = self.expr()?;
                self.expect(")")?;
                self.engine.phi_word(&ks, &a)
            }
            _ if self.eat("X") => {
                let n = self.index()?;
                self.engine.generator_x(n)
            }
            _ if self.eat("Z") => Ok(FreePoly::gen(self.index()?)),
            _ => Err(self.err("unexpected input")),
        }
    }
}

/// Outcome of one checked identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: String,
    pub ok: bool,
    pub lhs: FreePoly,
    pub rhs: FreePoly,
}

impl RelationReport {
    fn equal(relation: String, lhs: FreePoly, rhs: FreePoly) -> RelationReport {
        RelationReport { ok: lhs == rhs, relation, lhs, rhs }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "relation": self.relation,
            "status": if self.ok { "ok" } else { "fail" },
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
        })
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            write!(f, "ok    {}", self.relation)
        } else {
            write!(f, "FAIL  {}\n  lhs: {}\n  rhs: {}", self.relation, self.lhs, self.rhs)
        }
    }
}

/// Unreduced identities among the braiding coefficients, as `(lhs, rhs, min weight)`.
pub const RELATION_DISPLAYS: &[(&str, &str, usize)] = &[
    ("Ups[2,4] + Ups[4,2]", "6*Ups[1,2]^2", 6),
    ("-Ups[3,3]", "6*Ups[1,2]^2", 6),
    (
        "Ups[2,5] + Ups[5,2]",
        "6*Ups[1,2]*Ups[1,3] + 6*Ups[1,2]*phi[1](Ups[1,2]) + 8*Ups[1,3]*Ups[1,2]",
        7,
    ),
    (
        "Ups[3,4] + Ups[4,3]",
        "-6*Ups[1,2]*Ups[1,3] - 6*Ups[1,2]*phi[1](Ups[1,2]) - 8*Ups[1,3]*Ups[1,2]",
        7,
    ),
    (
        "Ups[3,5] + Ups[5,3]",
        "-6*Ups[1,2]*Ups[1,4] + 6*Ups[1,2]*Ups[2,3] + Ups[1,2]*phi[1,1](Ups[1,2]) - 9*Ups[1,2]*phi[2](Ups[1,2]) \
         - 8*Ups[1,3]*phi[1](Ups[1,2]) - 10*Ups[1,4]*Ups[1,2] + 12*Ups[2,3]*Ups[1,2]",
        8,
    ),
    (
        "Ups[4,4]",
        "-6*Ups[1,2]*Ups[2,3] - 6*Ups[1,2]*phi[1](Ups[1,3]) - 3*Ups[1,2]*phi[1,1](Ups[1,2]) + 3*Ups[1,2]*phi[2](Ups[1,2]) \
         - 8*Ups[1,3]^2 - 4*Ups[1,3]*phi[1](Ups[1,2]) - 12*Ups[2,3]*Ups[1,2]",
        8,
    ),
    (
        "Ups[4,5] + Ups[5,4]",
        "69*Ups[1,2]^3 - 6*Ups[1,2]*Ups[2,4] - 6*Ups[1,2]*phi[1](Ups[1,4]) - 5*Ups[1,2]*phi[1,1](Ups[1,3]) \
         - Ups[1,2]*phi[1,1,1](Ups[1,2]) - 9*Ups[1,2]*phi[2](Ups[1,3]) - 3*Ups[1,2]*phi[2,1](Ups[1,2]) \
         + 9*Ups[1,2]*phi[3](Ups[1,2]) - 8*Ups[1,3]*Ups[1,4] - 8*Ups[1,3]*Ups[2,3] - 16*Ups[1,3]*phi[1](Ups[1,3]) \
         - 6*Ups[1,3]*phi[1,1](Ups[1,2]) - 10*Ups[1,4]*Ups[1,3] - 5*Ups[1,4]*phi[1](Ups[1,2]) - 12*Ups[2,3]*Ups[1,3] \
         - 18*Ups[2,3]*phi[1](Ups[1,2]) - 15*Ups[2,4]*Ups[1,2]",
        9,
    ),
    ("phi[1](Ups[2,3]) + phi[2](Ups[3,1]) + phi[3](Ups[1,2])", "-Ups[1,2]^2", 6),
    (
        "phi[1](Ups[2,4]) + phi[2](Ups[4,1]) + phi[4](Ups[1,2])",
        "2*Ups[1,2]*Ups[1,3] - 2*Ups[1,2]*phi[1](Ups[1,2]) - 4*Ups[1,3]*Ups[1,2] + 6*phi[1](Ups[1,2])*Ups[1,2]",
        7,
    ),
    (
        "phi[1](Ups[3,4]) + phi[3](Ups[4,1]) + phi[4](Ups[1,3])",
        "3*Ups[1,2]*Ups[1,4] - 3*Ups[1,2]*Ups[2,3] - 3*Ups[1,2]*phi[1](Ups[1,3]) - 6*Ups[1,2]*phi[1,1](Ups[1,2]) \
         - 6*Ups[1,2]*phi[2](Ups[1,2]) - 2*Ups[1,3]^2 - 7*Ups[1,3]*phi[1](Ups[1,2]) - 2*Ups[1,4]*Ups[1,2] \
         + 3*Ups[2,3]*Ups[1,2] - 3*phi[1](Ups[1,2])^2 - 8*phi[1](Ups[1,3])*Ups[1,2] + 9*phi[2](Ups[1,2])*Ups[1,2]",
        8,
    ),
    (
        "phi[1,3](Ups[1,4]) - phi[3,1](Ups[1,4])",
        "3*Ups[1,2]*phi[1](Ups[1,4]) + Ups[1,3]*Ups[1,4] - Ups[1,4]*Ups[1,3] - 2*phi[1](Ups[1,4])*Ups[1,2]",
        9,
    ),
];

/// The commutators of the first generators `X_n`, as `(lhs, rhs, min weight)`.
pub const COMMUTATOR_DISPLAYS: &[(&str, &str, usize)] = &[
    ("X1*X2 - X2*X1", "6*Ups[1,2]", 3),
    ("X1*X3 - X3*X1", "4*phi[1](Ups[1,2]) + 4*Ups[1,3] + 8*Ups[1,2]*X1", 4),
    (
        "X2*X3 - X3*X2",
        "2*phi[1,1](Ups[1,2]) - 4*phi[1](Ups[1,3]) + 6*Ups[2,3] - 3*phi[1](Ups[1,2])*X1 + 2*Ups[1,3]*X1 \
         - 6*Ups[1,2]*X2 + Ups[1,2]*X1^2",
        5,
    ),
];

fn display_reports(table: &[(&str, &str, usize)], w_max: usize, engine: &Engine) -> Result<Vec<RelationReport>> {
    let mut out = Vec::new();
    for &(lhs, rhs, w) in table {
        if w <= w_max {
            let l = eval_symbolic(lhs, engine)?;
            let r = eval_symbolic(rhs, engine)?;
            out.push(RelationReport::equal(format!("{lhs} = {rhs}"), l, r));
        }
    }
    Ok(out)
}

/// Checks, through weight `w_max`: weak anti-symmetry, the unreduced displays,
/// the filtration congruences and the commutator table.
pub fn verify_relation_suite(w_max: usize, engine: &Engine) -> Result<Vec<RelationReport>> {
    if w_max > engine.order() {
        return Err(Error::PrecisionExhausted(format!("weight {w_max} exceeds engine order {}", engine.order())));
    }
    let mut out = Vec::new();
    for k in 3..=w_max {
        let mut acc = PolyAcc::new();
        for i in 1..k {
            acc.add(&engine.upsilon(i, k - i)?);
        }
        out.push(RelationReport::equal(format!("sum_{{i+j={k}}} Ups[i,j] = 0"), acc.finish(), FreePoly::zero()));
    }
    out.extend(display_reports(RELATION_DISPLAYS, w_max, engine)?);
    let long = |p: &FreePoly, min: usize| p.is_zero() || p.ideal_filtration_degree().map_or(false, |d| d >= min);
    for p in 1..w_max {
        for q in p + 1..w_max {
            if p + q > w_max {
                break;
            }
            let s = &engine.upsilon(p, q)? + &engine.upsilon(q, p)?;
            out.push(RelationReport {
                relation: format!("Ups[{p},{q}] + Ups[{q},{p}] has length >= 4"),
                ok: long(&s, 4),
                lhs: s,
                rhs: FreePoly::zero(),
            });
        }
    }
    for k in 1..w_max {
        for p in 1..w_max {
            for q in 1..w_max {
                if k + p + q > w_max {
                    continue;
                }
                let l = &(&engine.phi(k, &engine.upsilon(p, q)?)? + &engine.phi(p, &engine.upsilon(q, k)?)?)
                    + &engine.phi(q, &engine.upsilon(k, p)?)?;
                out.push(RelationReport {
                    relation: format!("Lambda[{k},{p},{q}] has length >= 4"),
                    ok: long(&l, 4),
                    lhs: l,
                    rhs: FreePoly::zero(),
                });
            }
        }
    }
    for p in 1..w_max {
        for q in p + 1..w_max {
            for aw in 1..=w_max.saturating_sub(p + q) {
                for a in crate::freealg::basis_words(aw) {
                    let a = FreePoly::monomial(a, Int::ONE);
                    let c = &engine.phi_word(&[p, q], &a)? - &engine.phi_word(&[q, p], &a)?;
                    let min = a.ideal_filtration_degree()? + 1;
                    out.push(RelationReport {
                        relation: format!("(phi{p}phi{q} - phi{q}phi{p})({a}) has length >= {min}"),
                        ok: long(&c, min),
                        lhs: c,
                        rhs: FreePoly::zero(),
                    });
                }
            }
        }
    }
    out.extend(display_reports(COMMUTATOR_DISPLAYS, w_max, engine)?);
    Ok(out)
}

/// Rank data at one weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightRank {
    pub weight: usize,
    pub monomials: usize,
    pub rank: usize,
    /// `2^{w-1}`.
    pub expected: Int,
    /// `sum_i p(i) u_{w-i}`.
    pub convolution: Int,
    /// A nontrivial integer relation among the monomials, when one exists.
    pub relation: Option<Vec<(String, Int)>>,
}

impl WeightRank {
    pub fn ok(&self) -> bool {
        self.relation.is_none()
            && self.rank == self.monomials
            && Int::from(self.monomials) == self.expected
            && self.convolution == self.expected
    }

    pub fn to_json(&self) -> Value {
        json!({
            "weight": self.weight,
            "monomials": self.monomials,
            "rank": self.rank,
            "expected": self.expected.to_string(),
            "convolution": self.convolution.to_string(),
            "status": if self.ok() { "ok" } else { "fail" },
        })
    }
}

/// Independence and count of generator words times X-monomials, weight by weight.
pub fn basis_check(w_max: usize, engine: &Engine) -> Result<Vec<WeightRank>> {
    if w_max > engine.order() {
        return Err(Error::PrecisionExhausted(format!("weight {w_max} exceeds engine order {}", engine.order())));
    }
    let dict = SymbolDictionary::module_basis(engine, w_max)?;
    let u = convolution_dims(w_max);
    let p = partition_numbers(w_max);
    (1..=w_max)
        .into_par_iter()
        .map(|w| {
            let entries: Vec<&Symbol> = dict.of_weight(w).map(|(_, s)| s).collect();
            let words = crate::freealg::basis_words(w);
            let col: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, wd)| (wd, i)).collect();
            let a: Vec<Vec<Int>> = entries
                .iter()
                .map(|s| {
                    let mut row = vec![Int::ZERO; words.len()];
                    for (wd, c) in s.poly.terms() {
                        row[col[wd]] = c.clone();
                    }
                    row
                })
                .collect();
            let mut form = hnf(&a, false);
            let mut relation = None;
            if form.rank() < entries.len() {
                form = hnf(&a, true);
                let u = form.u.as_ref().expect("transform requested");
                relation = Some(
                    u[form.rank()]
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(i, c)| (entries[i].name.clone(), c.clone()))
                        .collect(),
                );
            }
            let convolution = (0..=w).map(|i| &p[i] * &u[w - i]).fold(Int::ZERO, |a, b| &a + &b);
            Ok(WeightRank {
                weight: w,
                monomials: entries.len(),
                rank: form.rank(),
                expected: nsym_dim(w),
                convolution,
                relation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::fp;
    use crate::hur::Convention;
    use proptest::prelude::*;

    fn engine(order: usize) -> std::sync::Arc<Engine> {
        Engine::shared(order, Convention::default())
    }

    fn m(rows: &[&[i64]]) -> Vec<Vec<Int>> {
        rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect()
    }

    fn check_hnf(a: &[Vec<Int>]) {
        let f = hnf(a, true);
        let u = f.u.as_ref().unwrap();
        let n = a.first().map_or(0, |r| r.len());
        for i in 0..a.len() {
            for j in 0..n {
                let mut s = Int::ZERO;
                for k in 0..a.len() {
                    s += &(&u[i][k] * &a[k][j]);
                }
                assert_eq!(s, f.h[i][j]);
            }
        }
        assert!(determinant(u).abs().is_one());
        for (k, &(r, j)) in f.pivots.iter().enumerate() {
            assert_eq!(r, k);
            assert!(!f.h[r][j].is_negative() && !f.h[r][j].is_zero());
            for i in 0..a.len() {
                if i > r {
                    assert!(f.h[i][j].is_zero());
                } else if i < r {
                    assert!(!f.h[i][j].is_negative() && f.h[i][j] < f.h[r][j]);
                }
            }
            assert!(f.h[r][..j].iter().all(|x| x.is_zero()));
        }
        for row in &f.h[f.rank()..] {
            assert!(row.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn hnf_small() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let f = hnf(&a, true);
        assert_eq!(f.rank(), 3);
        let diag = f.pivots.iter().fold(Int::ONE, |acc, &(r, j)| &acc * &f.h[r][j]);
        assert_eq!(diag, determinant(&a).abs());
        assert_eq!(diag, Int::from(144));
        check_hnf(&a);
        check_hnf(&m(&[&[1, 2], &[2, 4], &[3, 6]]));
        assert_eq!(determinant(&m(&[&[2, 1], &[1, 3]])), Int::from(5));
    }

    #[test]
    fn hnf_64_by_64() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a: Vec<Vec<Int>> =
            (0..64).map(|_| (0..64).map(|_| Int::from(rng.gen_range(-1_000_000i64..=1_000_000))).collect()).collect();
        check_hnf(&a);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn hnf_properties(rows in 1usize..7, cols in 1usize..7, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<Vec<Int>> = (0..rows)
                .map(|_| (0..cols).map(|_| Int::from(rng.gen_range(-20i64..=20))).collect())
                .collect();
            check_hnf(&a);
        }
    }

    #[test]
    fn express_examples() {
        let e = engine(8);
        let gens = SymbolDictionary::upsilon_generators(&e, 8).unwrap();
        let x1 = e.generator_x(1).unwrap();
        let x2 = e.generator_x(2).unwrap();
        let ex = express(&x1.commutator(&x2), &gens).unwrap();
        assert_eq!(ex.display(&gens), "6*Ups[1,2]");
        assert!(ex.unique);
        let words = SymbolDictionary::generator_words(&e, 6).unwrap();
        let t = &e.upsilon(2, 4).unwrap() + &e.upsilon(4, 2).unwrap();
        let ex = express(&t, &words).unwrap();
        assert_eq!(ex.display(&words), "6*Ups[1,2]*Ups[1,2]");
        assert_eq!(ex.expand(&words), t);
        assert!(matches!(express(&fp("Z3"), &gens), Err(Error::NotInSpanLattice(_))));
        assert!(matches!(express(&fp("Z1 + Z2"), &gens), Err(Error::BadInput(_))));
    }

    #[test]
    fn express_non_unique() {
        let mut d = SymbolDictionary::new("test");
        d.push("a".into(), fp("Z1*Z2")).unwrap();
        d.push("b".into(), fp("Z2*Z1")).unwrap();
        d.push("c".into(), fp("Z1*Z2 + Z2*Z1")).unwrap();
        let ex = express(&fp("2*Z1*Z2 + 2*Z2*Z1"), &d).unwrap();
        assert!(!ex.unique);
        assert_eq!(ex.expand(&d), fp("2*Z1*Z2 + 2*Z2*Z1"));
        assert_eq!(ex.display(&d), "2*c");
    }

    #[test]
    fn symbolic_parser() {
        let e = engine(8);
        assert_eq!(eval_symbolic("Ups[1,2]", &e).unwrap(), e.upsilon(1, 2).unwrap());
        assert_eq!(eval_symbolic("2*Z1 - Z1", &e).unwrap(), fp("Z1"));
        assert_eq!(eval_symbolic("phi[1](Z2)", &e).unwrap(), fp("Z1*Z2 - Z2*Z1"));
        assert_eq!(eval_symbolic("X1^2", &e).unwrap(), fp("4*Z1^2"));
        assert!(eval_symbolic("Ups[1,", &e).is_err());
    }

    #[test]
    fn relation_suite_low_weight() {
        let e = engine(8);
        let reports = verify_relation_suite(8, &e).unwrap();
        for r in &reports {
            assert!(r.ok, "{r}");
        }
        assert!(reports.len() > 20);
    }

    #[test]
    fn basis_low_weight() {
        let e = engine(7);
        let ranks = basis_check(7, &e).unwrap();
        for r in &ranks {
            assert!(r.ok(), "{r:?}");
        }
        assert_eq!(ranks[2].monomials, 4);
    }
}
