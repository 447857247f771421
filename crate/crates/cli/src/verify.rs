use clap::ValueEnum;
use ncfgl_core::bfk::{
    antipode_holds, coaction_coassociative, coassociative, comodule_power_holds, counital, module_algebra_holds,
    Antipode, CoproductVariant,
};
use ncfgl_core::error::Result;
use ncfgl_core::fgl::Engine;
use ncfgl_core::freealg::{basis_words, FreePoly};
use ncfgl_core::hur::{BraidOrientation, XExpansion};
use ncfgl_core::int::Int;
use ncfgl_core::rewrite::{basis_check, verify_relation_suite};
use ncfgl_core::symfun::{
    chern, compositions, graded_dims, qsym_mul, quasi_shuffle, specialize, vieta, Composition, QSymElement,
};
use serde_json::json;

use crate::output::Entry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Relations,
    Hopf,
    Basis,
    Qsym,
    Vieta,
    All,
}

/// The outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), ok, detail: None }
    }

    pub fn entry(&self) -> Entry {
        let status = if self.ok { "ok" } else { "FAIL" };
        let text = match &self.detail {
            Some(d) => format!("{status}\n{d}"),
            None => status.to_string(),
        };
        Entry {
            label: self.name.clone(),
            latex_label: format!("\\text{{{}}}", self.name),
            latex: format!("\\text{{{status}}}"),
            text,
            json: json!({"status": if self.ok { "ok" } else { "fail" }, "detail": self.detail}),
        }
    }
}

/// Runs one suite (or all) through weight `w`. `engine` must have order at least `w`.
pub fn run_suite(suite: Suite, w: usize, engine: &Engine) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Relations {
        out.extend(relations(w, engine)?);
    }
    if all || suite == Suite::Basis {
        out.extend(basis(w, engine)?);
    }
    if all || suite == Suite::Hopf {
        out.extend(hopf(w, engine)?);
    }
    if all || suite == Suite::Qsym {
        out.extend(qsym(w, engine)?);
    }
    if all || suite == Suite::Vieta {
        out.extend(vieta_checks(w, engine)?);
    }
    Ok(out)
}

fn relations(w: usize, engine: &Engine) -> Result<Vec<Check>> {
    Ok(verify_relation_suite(w, engine)?
        .into_iter()
        .map(|r| Check {
            name: format!("relation {}", r.relation),
            ok: r.ok,
            detail: (!r.ok).then(|| format!("lhs: {}\nrhs: {}", r.lhs, r.rhs)),
        })
        .collect())
}

fn basis(w: usize, engine: &Engine) -> Result<Vec<Check>> {
    let mut out = vec![Check::new(format!("graded dimensions agree through weight {w}"), graded_dims(w).is_ok())];
    for r in basis_check(w, engine)? {
        let mut c = Check::new(format!("module basis rank at weight {}", r.weight), r.ok());
        if let Some(rel) = &r.relation {
            c.detail = Some(rel.iter().map(|(n, k)| format!("{k}*{n}")).collect::<Vec<_>>().join(" + "));
        } else if !c.ok {
            c.detail = Some(format!("{} monomials, rank {}, expected {}", r.monomials, r.rank, r.expected));
        }
        out.push(c);
    }
    Ok(out)
}

fn hopf(w: usize, engine: &Engine) -> Result<Vec<Check>> {
    let v = CoproductVariant::Corrected;
    let chi = Antipode::new(w);
    let mut out = Vec::new();
    for n in 0..=w {
        out.push(Check::new(format!("coassociativity of Delta(phi{n})"), coassociative(n, v)));
        out.push(Check::new(format!("counit on phi{n}"), counital(n, v)));
        out.push(Check::new(format!("antipode on phi{n}"), antipode_holds(n, &chi, v)));
    }
    for n in 0..=w.min(5) {
        out.push(Check::new(format!("coaction on x^{n}"), comodule_power_holds(n, w)));
    }
    out.push(Check::new(format!("coaction coassociative through x-degree {w}"), coaction_coassociative(v, w)));
    // module algebra on all pairs of words of weight <= 2
    let words: Vec<FreePoly> =
        (1..=2).flat_map(basis_words).map(|wd| FreePoly::monomial(wd, Int::ONE)).collect();
    for a in &words {
        for b in &words {
            let room = w.saturating_sub(a.max_weight().unwrap_or(0) + b.max_weight().unwrap_or(0));
            for n in 1..=room {
                out.push(Check::new(
                    format!("phi{n}(({a})*({b})) module algebra"),
                    module_algebra_holds(n, a, b, v, engine)?,
                ));
            }
        }
    }
    Ok(out)
}

fn qsym(w: usize, engine: &Engine) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let m1 = QSymElement::monomial(&[1], w as i32);
    let prod = qsym_mul(&m1, &m1, w)?;
    let mut expected = QSymElement::monomial(&[2], w as i32);
    expected.add_term(Composition(vec![1, 1]), &FreePoly::constant(Int::from(2)));
    for p in 1..w {
        for q in 1..w {
            if p + q + 2 <= w {
                let u = engine.upsilon_table().get(p, q, BraidOrientation::Literal)?;
                expected.add_term(Composition(vec![1 + p, 1 + q]), &u);
            }
        }
    }
    out.push(Check::new("m1*m1 = m2 + 2*m[1,1] + sum Ups[p,q]*m[1+p,1+q] (literal names)", prod == expected));
    let top = w.min(6);
    let mut mismatches = Vec::new();
    for s in 2..=top {
        for sa in 1..s {
            for a in compositions(sa) {
                for b in compositions(s - sa) {
                    let p = specialize(&qsym_mul(
                        &QSymElement::monomial(&a.0, s as i32),
                        &QSymElement::monomial(&b.0, s as i32),
                        s,
                    )?);
                    let mut classical = QSymElement::zero(s as i32);
                    for (c, k) in quasi_shuffle(&a.0, &b.0) {
                        classical.add_term(c, &FreePoly::constant(k));
                    }
                    if p != classical {
                        mismatches.push(format!("{a}*{b}"));
                    }
                }
            }
        }
    }
    let mut c = Check::new(
        format!("commutative specialization equals the quasi-shuffle through size {top}"),
        mismatches.is_empty(),
    );
    if !mismatches.is_empty() {
        c.detail = Some(mismatches.join(", "));
    }
    out.push(c);
    Ok(out)
}

fn vieta_checks(w: usize, engine: &Engine) -> Result<Vec<Check>> {
    let conv = engine.convention();
    let mut out = Vec::new();
    let deg = w.min(7);
    for n in 1..=3.min(deg) {
        let frame = vieta(n, deg, conv);
        out.push(Check::new(
            format!("Vieta side relation in {n} variables through degree {deg}"),
            frame.side_relation_holds(conv.vieta_side),
        ));
        out.push(Check::new(
            format!("y1 = x1 in {n} variables"),
            frame.y[0] == XExpansion::var(n, 0, deg as i32),
        ));
    }
    for n in 1..=3.min(deg) {
        for k in 1..=n {
            let r = chern(k, n, deg, conv);
            let mut c = Check::new(format!("c{k} in {n} variables is quasi-symmetric"), r.is_ok());
            if let Err(e) = r {
                c.detail = Some(e.to_string());
            }
            out.push(c);
        }
    }
    Ok(out)
}
