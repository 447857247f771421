use std::sync::Arc;

use clap::ValueEnum;

use ncfgl_core::error::Error;
use ncfgl_core::fgl::Engine;
use ncfgl_core::freealg::FreePoly;
use ncfgl_core::rewrite::{basis_check, eval_symbolic, express, SymbolDictionary};
use ncfgl_core::symfun::{
    chern, graded_dims, qsym_mul, qsym_scalar, splitting_b, theta_table, vieta, whitney_coproduct, QSymElement,
};

use crate::output::{symbol_latex, Entry, Report};
use crate::verify::run_suite;
use crate::{CliError, Command, RunConfig};

/// Default weight bound for the small published tables.
const TABLE_WEIGHT: usize = 6;

pub(crate) fn engine(cfg: &RunConfig) -> Arc<Engine> {
    Engine::shared(cfg.order, cfg.convention)
}

fn table_weight(cfg: &RunConfig, default: usize) -> Result<usize, CliError> {
    let w = cfg.max_weight.unwrap_or(default.min(cfg.order));
    if w > cfg.order {
        return Err(Error::PrecisionExhausted(format!("--max-weight {w} exceeds --order {}", cfg.order)).into());
    }
    Ok(w)
}

fn need(what: &str, v: Option<usize>) -> Result<usize, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{what} is required together with its partner flag")))
}

/// Reads `2,1`, `[2,1]` or `m[2,1]`.
pub(crate) fn parse_composition(s: &str) -> Result<Vec<usize>, CliError> {
    let t = s.trim().trim_start_matches('m').trim_start_matches('[').trim_end_matches(']');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| match p.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => Err(CliError::Usage(format!("bad composition {s:?}: parts must be positive integers"))),
        })
        .collect()
}

fn comp_label(i: &[usize]) -> String {
    format!("m[{}]", i.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))
}

fn comp_latex(i: &[usize]) -> String {
    if i.is_empty() {
        "1".into()
    } else {
        format!("m_{{{}}}", i.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn degree_label(cfg: &RunConfig, w: usize) -> String {
    if cfg.topological {
        format!("degree {}", 2 * w)
    } else {
        format!("weight {w}")
    }
}

/// Runs a non-figure subcommand. The second value counts failed checks.
pub(crate) fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<(Report, usize), CliError> {
    let report = match cmd {
        Command::Phi { k, arg } => phi(cfg, *k, arg.as_deref())?,
        Command::Upsilon { p, q } => upsilon(cfg, *p, *q)?,
        Command::Fgl { i, j } => fgl(cfg, *i, *j)?,
        Command::Inverse => inverse(cfg),
        Command::Gens => gens(cfg)?,
        Command::Commutators => commutators(cfg, table_weight(cfg, 5)?)?,
        Command::Vieta { vars, degree } => vieta_report(cfg, *vars, *degree)?,
        Command::Chern { k, vars, degree } => {
            let n = vars.unwrap_or(*k);
            if *k == 0 || n < *k {
                return Err(CliError::Usage(format!("need 1 <= k <= vars, got k = {k}, vars = {n}")));
            }
            let c = chern(*k, n, *degree, cfg.convention)?;
            Report::single(
                format!("c_{k} in {n} variables through degree {degree}"),
                Entry::qsym(format!("c{k}"), format!("c_{{{k}}}"), &c),
            )
        }
        Command::QsymMul { a, b, degree } => {
            let (a, b) = (parse_composition(a)?, parse_composition(b)?);
            let p = qsym_mul(
                &QSymElement::monomial(&a, *degree as i32),
                &QSymElement::monomial(&b, *degree as i32),
                *degree,
            )?;
            let label = format!("{}*{}", comp_label(&a), comp_label(&b));
            Report::single(
                format!("{label} through degree {degree}"),
                Entry::qsym(label, format!("{} {}", comp_latex(&a), comp_latex(&b)), &p),
            )
        }
        Command::QsymScalar { i, r, degree } => {
            let i = parse_composition(i)?;
            let e = engine(cfg);
            let rv = eval_symbolic(r, &e)?;
            let q = qsym_scalar(&i, &rv, *degree, &e)?;
            let label = format!("{}*({r})", comp_label(&i));
            Report::single(
                format!("{label} through degree {degree}"),
                Entry::qsym(label, format!("{}\\,({})", comp_latex(&i), symbol_latex(r)), &q),
            )
        }
        Command::Whitney { i, chern: k, vars, degree } => {
            let (a, name) = match (i, k) {
                (Some(i), None) => {
                    let i = parse_composition(i)?;
                    (QSymElement::monomial(&i, *degree as i32), comp_label(&i))
                }
                (None, Some(k)) => {
                    let n = vars.unwrap_or(*k);
                    (chern(*k, n, *degree, cfg.convention)?, format!("c{k}"))
                }
                _ => return Err(CliError::Usage("whitney needs exactly one of --i or --chern".into())),
            };
            let mut rep = Report::new(format!("Whitney coproduct of {name}"));
            for ((p, q), c) in whitney_coproduct(&a) {
                rep.push(Entry::poly(
                    format!("{} (x) {}", comp_label(&p.0), comp_label(&q.0)),
                    format!("{} \\otimes {}", comp_latex(&p.0), comp_latex(&q.0)),
                    &c,
                ));
            }
            rep
        }
        Command::Theta => {
            let mut rep = Report::new(format!("theta[p,q] through order {}", cfg.order));
            for ((p, q), c) in theta_table(cfg.order) {
                rep.push(Entry::poly(format!("theta[{p},{q}]"), format!("\\theta_{{{p},{q}}}"), &c));
            }
            rep
        }
        Command::SplittingB => {
            let w = table_weight(cfg, 8)?.max(3);
            let mut rep = Report::new(format!("B[n,m] for n + m <= {w}"));
            for ((n, m), c) in splitting_b(w, cfg.convention) {
                rep.push(Entry::poly(format!("B[{n},{m}]"), format!("B_{{{n},{m}}}"), &c));
            }
            rep
        }
        Command::Ranks => ranks(cfg, table_weight(cfg, 8)?)?,
        Command::Verify { suite } => {
            let w = cfg.max_weight.unwrap_or(8);
            if w > cfg.order {
                return Err(Error::PrecisionExhausted(format!("--max-weight {w} exceeds --order {}", cfg.order)).into());
            }
            let checks = run_suite(*suite, w, &engine(cfg))?;
            let failures = checks.iter().filter(|c| !c.ok).count();
            let name = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
            let mut rep =
                Report::new(format!("verify {name} through weight {w}: {} checks, {failures} failures", checks.len()));
            for c in &checks {
                rep.push(c.entry());
            }
            return Ok((rep, failures));
        }
        Command::ReproduceFigures => unreachable!("handled by the caller"),
    };
    Ok((report, 0))
}

fn phi(cfg: &RunConfig, k: Option<usize>, arg: Option<&str>) -> Result<Report, CliError> {
    let e = engine(cfg);
    match (k, arg) {
        (Some(k), Some(a)) => {
            let v = e.phi(k, &eval_symbolic(a, &e)?)?;
            Ok(Report::single(
                format!("phi{k}({a})"),
                Entry::poly(format!("phi{k}({a})"), format!("\\varphi_{{{k}}}({})", symbol_latex(a)), &v),
            ))
        }
        (None, Some(a)) => {
            let av = eval_symbolic(a, &e)?;
            let w = av.max_weight().unwrap_or(0);
            let mut rep = Report::new(format!("phi_k({a}) through order {}", cfg.order));
            for (k, v) in e.phi_all(&av, cfg.order.saturating_sub(w))?.iter().enumerate().skip(1) {
                rep.push(Entry::poly(format!("phi{k}({a})"), format!("\\varphi_{{{k}}}({})", symbol_latex(a)), v));
            }
            Ok(rep)
        }
        (Some(_), None) => Err(CliError::Usage("--k needs --arg".into())),
        (None, None) => {
            let w = table_weight(cfg, TABLE_WEIGHT)?;
            let mut rep = Report::new(format!("phi_k(Z_l) for k + l <= {w}"));
            for s in 3..=w {
                for l in (1..s).rev() {
                    let k = s - l;
                    rep.push(Entry::poly(
                        format!("phi{k}(Z{l})"),
                        format!("\\varphi_{{{k}}}(Z_{{{l}}})"),
                        &e.phi(k, &FreePoly::gen(l))?,
                    ));
                }
            }
            Ok(rep)
        }
    }
}

fn upsilon(cfg: &RunConfig, p: Option<usize>, q: Option<usize>) -> Result<Report, CliError> {
    let e = engine(cfg);
    if p.is_some() || q.is_some() {
        let (p, q) = (need("--p", p)?, need("--q", q)?);
        return Ok(Report::single(
            format!("Ups[{p},{q}]"),
            Entry::poly(format!("Ups[{p},{q}]"), format!("\\Upsilon_{{{p},{q}}}"), &e.upsilon(p, q)?),
        ));
    }
    let w = table_weight(cfg, TABLE_WEIGHT)?;
    let mut rep = Report::new(format!("Ups[p,q] for p + q <= {w}"));
    for s in 3..=w {
        for p in 1..s {
            let q = s - p;
            rep.push(Entry::poly(format!("Ups[{p},{q}]"), format!("\\Upsilon_{{{p},{q}}}"), &e.upsilon(p, q)?));
        }
    }
    Ok(rep)
}

fn fgl(cfg: &RunConfig, i: Option<usize>, j: Option<usize>) -> Result<Report, CliError> {
    let e = engine(cfg);
    if i.is_some() || j.is_some() {
        let (i, j) = (need("--i", i)?, need("--j", j)?);
        return Ok(Report::single(
            format!("a[{i},{j}]"),
            Entry::poly(format!("a[{i},{j}]"), format!("a_{{{i},{j}}}"), &e.fgl_coeff(i, j)?),
        ));
    }
    let w = table_weight(cfg, TABLE_WEIGHT)?;
    let mut rep = Report::new(format!("a[i,j] for i + j <= {w}"));
    for s in 2..=w {
        for i in 1..s {
            let j = s - i;
            rep.push(Entry::poly(format!("a[{i},{j}]"), format!("a_{{{i},{j}}}"), &e.fgl_coeff(i, j)?));
        }
    }
    Ok(rep)
}

fn inverse(cfg: &RunConfig) -> Report {
    let e = engine(cfg);
    let mut rep = Report::new(format!("formal inverse coefficients through order {}", cfg.order));
    for (k, c) in e.formal_inverse().iter().enumerate().skip(1) {
        rep.push(Entry::poly(format!("iota{k}"), format!("\\iota_{{{k}}}"), c));
    }
    rep
}

fn gens(cfg: &RunConfig) -> Result<Report, CliError> {
    let e = engine(cfg);
    let w = cfg.max_weight.unwrap_or(cfg.order);
    let mut rep = Report::new(format!("generators X_n for n <= {w}"));
    for n in 1..=w {
        let mut entry = Entry::poly(format!("X{n}"), format!("X_{{{n}}}"), &e.generator_x(n)?);
        entry.label = format!("X{n} ({})", degree_label(cfg, n));
        rep.push(entry);
    }
    Ok(rep)
}

/// `[X_i, X_j]` for `i < j`, `i + j <= w`, in the basis of generator words times X-monomials.
pub(crate) fn commutators(cfg: &RunConfig, w: usize) -> Result<Report, CliError> {
    let e = engine(cfg);
    let dict = SymbolDictionary::module_basis(&e, w)?;
    let mut rep = Report::new(format!("[X_i,X_j] for i + j <= {w}"));
    for s in 3..=w {
        for i in 1..=(s - 1) / 2 {
            let j = s - i;
            let c = e.generator_x(i)?.commutator(&e.generator_x(j)?);
            let ex = express(&c, &dict)?;
            let text = ex.display(&dict);
            rep.push(Entry {
                label: format!("[X{i},X{j}]"),
                latex_label: format!("[X_{{{i}}},X_{{{j}}}]"),
                latex: symbol_latex(&text),
                text,
                json: ex.to_json(&dict),
            });
        }
    }
    Ok(rep)
}

pub(crate) fn vieta_report(cfg: &RunConfig, vars: usize, degree: usize) -> Result<Report, CliError> {
    if vars == 0 || degree < vars {
        return Err(CliError::Usage(format!("need 1 <= vars <= degree, got vars = {vars}, degree = {degree}")));
    }
    let frame = vieta(vars, degree, cfg.convention);
    let mut rep = Report::new(format!("Vieta coordinates in {vars} variables through degree {degree}"));
    for (k, y) in frame.y.iter().enumerate() {
        rep.push(Entry::expansion(format!("y{}", k + 1), format!("y_{{{}}}", k + 1), y));
    }
    Ok(rep)
}

fn ranks(cfg: &RunConfig, w: usize) -> Result<Report, CliError> {
    let e = engine(cfg);
    let u = graded_dims(w)?;
    let mut rep = Report::new(format!("module basis ranks through weight {w}"));
    for r in basis_check(w, &e)? {
        let text = format!(
            "monomials {}, rank {}, 2^(w-1) {}, convolution {}, u {}, {}",
            r.monomials,
            r.rank,
            r.expected,
            r.convolution,
            u[r.weight],
            if r.ok() { "ok" } else { "FAIL" }
        );
        rep.push(Entry {
            label: degree_label(cfg, r.weight),
            latex_label: format!("\\text{{{}}}", degree_label(cfg, r.weight)),
            latex: format!("\\text{{{text}}}"),
            text,
            json: r.to_json(),
        });
    }
    Ok(rep)
}
