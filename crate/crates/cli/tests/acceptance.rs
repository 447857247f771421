//! End-to-end acceptance run: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use ncfgl_core::bfk::{
    act, antipode_holds, coaction_coassociative, coassociative, comodule_power_holds, counital, module_algebra_holds,
    q_poly, Antipode, BElement, CoproductVariant,
};
use ncfgl_core::fgl::{schauenburg_series, Engine};
use ncfgl_core::freealg::{FreePoly, Word};
use ncfgl_core::hur::{braid_swap, confluence_holds, orientation_series, Convention, HurContext, XExpansion};
use ncfgl_core::int::Int;
use ncfgl_core::rewrite::{basis_check, eval_symbolic, verify_relation_suite};
use ncfgl_core::symfun::{
    chern, compositions, convolution_dims, cotensor_defect, generator_dims, graded_dims, partition_numbers, qsym_mul,
    specialize, splitting_b, vieta, Composition, QSymElement,
};
use ncfgl_core::tlaurent::{ts_mul, Mono};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn poly(s: &str) -> FreePoly {
    FreePoly::parse(s).unwrap_or_else(|e| panic!("bad literal {s:?}: {e}"))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// `phi_k(Z_l)` as `(k, l, value)`.
const PHI_TABLE: &[(usize, usize, &str)] = &[
    (1, 2, "Z1*Z2 - Z2*Z1"),
    (2, 1, "-Z1*Z2 + Z2*Z1"),
    (1, 3, "Z1*Z3 - Z3*Z1"),
    (2, 2, "-2*Z1*Z2*Z1 + 2*Z2*Z1*Z1"),
    (3, 1, "-Z1*Z3 + Z3*Z1 + 3*Z1*Z2*Z1 - 3*Z2*Z1*Z1"),
    (1, 4, "Z1*Z4 - Z4*Z1"),
    (2, 3, "Z2*Z3 - Z3*Z2 - 2*Z1*Z3*Z1 + 2*Z3*Z1*Z1"),
    (3, 2, "-Z2*Z3 + Z3*Z2 - 2*Z1*Z2*Z2 + 2*Z2*Z1*Z2 + 5*Z1*Z2*Z1*Z1 - 5*Z2*Z1*Z1*Z1"),
    (
        4,
        1,
        "-Z1*Z4 + Z4*Z1 + 3*Z1*Z2*Z2 + 4*Z1*Z3*Z1 - 3*Z2*Z1*Z2 - 4*Z3*Z1*Z1 - 9*Z1*Z2*Z1*Z1 + 9*Z2*Z1*Z1*Z1",
    ),
    (1, 5, "Z1*Z5 - Z5*Z1"),
    (2, 4, "Z2*Z4 - Z4*Z2 - 2*Z1*Z4*Z1 + 2*Z4*Z1*Z1"),
    (3, 3, "-2*Z1*Z3*Z2 - 3*Z2*Z3*Z1 + 2*Z3*Z1*Z2 + 3*Z3*Z2*Z1 + 5*Z1*Z3*Z1*Z1 - 5*Z3*Z1*Z1*Z1"),
    (
        4,
        2,
        "-Z2*Z4 + Z4*Z2 - 2*Z1*Z2*Z3 + 2*Z2*Z1*Z3 + 4*Z2*Z3*Z1 - 4*Z3*Z2*Z1 + 5*Z1*Z2*Z1*Z2 + 7*Z1*Z2*Z2*Z1 \
         - 5*Z2*Z1*Z1*Z2 - 7*Z2*Z1*Z2*Z1 - 14*Z1*Z2*Z1*Z1*Z1 + 14*Z2*Z1*Z1*Z1*Z1",
    ),
    (
        5,
        1,
        "-Z1*Z5 + Z5*Z1 + 3*Z1*Z2*Z3 + 4*Z1*Z3*Z2 + 5*Z1*Z4*Z1 - 3*Z2*Z1*Z3 - 4*Z3*Z1*Z2 - 5*Z4*Z1*Z1 \
         - 9*Z1*Z2*Z1*Z2 - 12*Z1*Z2*Z2*Z1 - 14*Z1*Z3*Z1*Z1 + 9*Z2*Z1*Z1*Z2 + 12*Z2*Z1*Z2*Z1 + 14*Z3*Z1*Z1*Z1 \
         + 28*Z1*Z2*Z1*Z1*Z1 - 28*Z2*Z1*Z1*Z1*Z1",
    ),
];

/// Braiding coefficients `(p, q, value)` with `Ups[q,p] = -Ups[p,q]`.
const UPSILON_ANTISYMMETRIC: &[(usize, usize, &str)] = &[
    (1, 2, "Z1*Z2 - Z2*Z1"),
    (1, 3, "Z1*Z3 - Z3*Z1 - 3*Z1*Z2*Z1 + 3*Z2*Z1*Z1"),
    (
        1,
        4,
        "Z1*Z4 - Z4*Z1 - 3*Z1*Z2*Z2 - 4*Z1*Z3*Z1 + 3*Z2*Z1*Z2 + 4*Z3*Z1*Z1 + 9*Z1*Z2*Z1*Z1 - 9*Z2*Z1*Z1*Z1",
    ),
    (
        2,
        3,
        "Z2*Z3 - Z3*Z2 + 2*Z1*Z2*Z2 - 2*Z1*Z3*Z1 - 2*Z2*Z1*Z2 + 2*Z3*Z1*Z1 + Z1*Z2*Z1*Z1 - Z2*Z1*Z1*Z1",
    ),
    (
        1,
        5,
        "Z1*Z5 - Z5*Z1 - 3*Z1*Z2*Z3 - 4*Z1*Z3*Z2 - 5*Z1*Z4*Z1 + 3*Z2*Z1*Z3 + 4*Z3*Z1*Z2 + 5*Z4*Z1*Z1 \
         + 9*Z1*Z2*Z1*Z2 + 12*Z1*Z2*Z2*Z1 + 14*Z1*Z3*Z1*Z1 - 9*Z2*Z1*Z1*Z2 - 12*Z2*Z1*Z2*Z1 - 14*Z3*Z1*Z1*Z1 \
         - 28*Z1*Z2*Z1*Z1*Z1 + 28*Z2*Z1*Z1*Z1*Z1",
    ),
];

const UPSILON_24: &str = "Z2*Z4 - Z4*Z2 + 2*Z1*Z2*Z3 - 2*Z1*Z4*Z1 - 2*Z2*Z1*Z3 - 4*Z2*Z3*Z1 + 4*Z3*Z2*Z1 \
     + 2*Z4*Z1*Z1 + Z1*Z2*Z1*Z2 - 7*Z1*Z2*Z2*Z1 + 8*Z1*Z3*Z1*Z1 - Z2*Z1*Z1*Z2 + 7*Z2*Z1*Z2*Z1 - 8*Z3*Z1*Z1*Z1 \
     - 4*Z1*Z2*Z1*Z1*Z1 + 4*Z2*Z1*Z1*Z1*Z1";
const UPSILON_33: &str = "-6*Z1*Z2*Z1*Z2 + 6*Z1*Z2*Z2*Z1 + 6*Z2*Z1*Z1*Z2 - 6*Z2*Z1*Z2*Z1";
/// `Ups[4,2] + Ups[2,4]`.
const UPSILON_42_DEFECT: &str = "6*Z1*Z2*Z1*Z2 - 6*Z1*Z2*Z2*Z1 - 6*Z2*Z1*Z1*Z2 + 6*Z2*Z1*Z2*Z1";

/// `a[i,j]` for `i + j <= 6`.
const FGL_TABLE: &[(usize, usize, &str)] = &[
    (1, 1, "2*Z1"),
    (1, 2, "3*Z2 - 2*Z1*Z1"),
    (2, 1, "3*Z2 - 2*Z1*Z1"),
    (1, 3, "4*Z3 - 2*Z1*Z2 - 6*Z2*Z1 + 4*Z1*Z1*Z1"),
    (2, 2, "6*Z3 - 6*Z2*Z1 + 2*Z1*Z1*Z1"),
    (3, 1, "4*Z3 - 2*Z1*Z2 - 6*Z2*Z1 + 4*Z1*Z1*Z1"),
    (1, 4, "5*Z4 - 2*Z1*Z3 - 6*Z2*Z2 - 12*Z3*Z1 + 4*Z1*Z1*Z2 + 6*Z1*Z2*Z1 + 15*Z2*Z1*Z1 - 10*Z1*Z1*Z1*Z1"),
    (2, 3, "10*Z4 - 3*Z2*Z2 - 16*Z3*Z1 + 2*Z1*Z2*Z1 + 12*Z2*Z1*Z1 - 4*Z1*Z1*Z1*Z1"),
    (3, 2, "10*Z4 - 3*Z2*Z2 - 16*Z3*Z1 + 2*Z1*Z1*Z2 + 12*Z2*Z1*Z1 - 4*Z1*Z1*Z1*Z1"),
    (4, 1, "5*Z4 - 2*Z1*Z3 - 6*Z2*Z2 - 12*Z3*Z1 + 4*Z1*Z1*Z2 + 6*Z1*Z2*Z1 + 15*Z2*Z1*Z1 - 10*Z1*Z1*Z1*Z1"),
    (
        1,
        5,
        "6*Z5 - 2*Z1*Z4 - 6*Z2*Z3 - 12*Z3*Z2 - 20*Z4*Z1 + 4*Z1*Z1*Z3 + 6*Z1*Z2*Z2 + 8*Z1*Z3*Z1 + 15*Z2*Z1*Z2 \
         + 21*Z2*Z2*Z1 + 36*Z3*Z1*Z1 - 10*Z1*Z1*Z1*Z2 - 14*Z1*Z1*Z2*Z1 - 18*Z1*Z2*Z1*Z1 - 42*Z2*Z1*Z1*Z1 \
         + 28*Z1*Z1*Z1*Z1*Z1",
    ),
    (
        2,
        4,
        "15*Z5 - 3*Z2*Z3 - 12*Z3*Z2 - 35*Z4*Z1 + 2*Z1*Z3*Z1 + 6*Z2*Z1*Z2 + 15*Z2*Z2*Z1 + 42*Z3*Z1*Z1 \
         - 4*Z1*Z1*Z2*Z1 - 6*Z1*Z2*Z1*Z1 - 30*Z2*Z1*Z1*Z1 + 10*Z1*Z1*Z1*Z1*Z1",
    ),
    (
        3,
        3,
        "20*Z5 - 8*Z3*Z2 - 40*Z4*Z1 + 2*Z1*Z2*Z2 + 6*Z2*Z1*Z2 + 6*Z2*Z2*Z1 + 40*Z3*Z1*Z1 - 4*Z1*Z1*Z1*Z2 \
         - 4*Z1*Z2*Z1*Z1 - 24*Z2*Z1*Z1*Z1 + 8*Z1*Z1*Z1*Z1*Z1",
    ),
    (
        4,
        2,
        "15*Z5 - 3*Z2*Z3 - 12*Z3*Z2 - 35*Z4*Z1 + 2*Z1*Z1*Z3 + 12*Z2*Z1*Z2 + 9*Z2*Z2*Z1 + 42*Z3*Z1*Z1 \
         - 4*Z1*Z1*Z1*Z2 - 6*Z1*Z1*Z2*Z1 - 30*Z2*Z1*Z1*Z1 + 10*Z1*Z1*Z1*Z1*Z1",
    ),
    (
        5,
        1,
        "6*Z5 - 2*Z1*Z4 - 6*Z2*Z3 - 12*Z3*Z2 - 20*Z4*Z1 + 4*Z1*Z1*Z3 + 6*Z1*Z2*Z2 + 8*Z1*Z3*Z1 + 15*Z2*Z1*Z2 \
         + 21*Z2*Z2*Z1 + 36*Z3*Z1*Z1 - 10*Z1*Z1*Z1*Z2 - 14*Z1*Z1*Z2*Z1 - 18*Z1*Z2*Z1*Z1 - 42*Z2*Z1*Z1*Z1 \
         + 28*Z1*Z1*Z1*Z1*Z1",
    ),
];

fn phi_table() -> Outcome {
    let e = Engine::new(7, Convention::default());
    for &(k, l, want) in PHI_TABLE {
        let got = e.phi(k, &FreePoly::gen(l)).map_err(err)?;
        ensure!(got == poly(want), "phi{k}(Z{l}) = {got}, expected {want}");
    }
    Ok(())
}

fn upsilon_table() -> Outcome {
    let e = Engine::new(7, Convention::default());
    let get = |p, q| e.upsilon(p, q).map_err(err);
    for &(p, q, want) in UPSILON_ANTISYMMETRIC {
        let want = poly(want);
        ensure!(get(p, q)? == want, "Ups[{p},{q}] = {}, expected {want}", get(p, q)?);
        ensure!(get(q, p)? == -&want, "Ups[{q},{p}] is not -Ups[{p},{q}]");
    }
    ensure!(get(2, 2)?.is_zero(), "Ups[2,2] = {}", get(2, 2)?);
    let u15 = poly(UPSILON_ANTISYMMETRIC[4].2);
    ensure!(u15.num_terms() == 16, "Ups[1,5] literal has {} terms", u15.num_terms());
    let u24 = poly(UPSILON_24);
    ensure!(get(2, 4)? == u24, "Ups[2,4] = {}", get(2, 4)?);
    ensure!(get(3, 3)? == poly(UPSILON_33), "Ups[3,3] = {}", get(3, 3)?);
    let u42 = &poly(UPSILON_42_DEFECT) - &u24;
    ensure!(get(4, 2)? == u42, "Ups[4,2] = {}", get(4, 2)?);
    Ok(())
}

fn fgl_table() -> Outcome {
    let e = Engine::new(7, Convention::default());
    for &(i, j, want) in FGL_TABLE {
        let got = e.fgl_coeff(i, j).map_err(err)?;
        ensure!(got == poly(want), "a[{i},{j}] = {got}, expected {want}");
    }
    let a = |i, j| e.fgl_coeff(i, j).unwrap();
    ensure!(a(1, 4) == a(4, 1) && a(1, 5) == a(5, 1), "a[1,n] != a[n,1]");
    let diff = &a(2, 3) - &a(3, 2);
    ensure!(diff == poly("2*Z1*Z2*Z1 - 2*Z1*Z1*Z2"), "a[2,3] - a[3,2] = {diff}");
    Ok(())
}

fn relation_suite() -> Outcome {
    let e = Engine::new(10, Convention::default());
    let reports = verify_relation_suite(10, &e).map_err(err)?;
    if let Some(r) = reports.iter().find(|r| !r.ok) {
        return Err(format!("{r}"));
    }
    for needle in [
        "Ups[4,5] + Ups[5,4] = ",
        "phi[1](Ups[2,3]) + phi[2](Ups[3,1]) + phi[3](Ups[1,2]) = -Ups[1,2]^2",
        "phi[1,3](Ups[1,4]) - phi[3,1](Ups[1,4]) = ",
    ] {
        ensure!(reports.iter().any(|r| r.relation.starts_with(needle)), "suite is missing {needle:?}");
    }
    // weak anti-symmetry, recomputed here
    for k in 3..=10 {
        let sum: FreePoly = (1..k).map(|i| e.upsilon(i, k - i).unwrap()).sum();
        ensure!(sum.is_zero(), "sum of Ups[i,j] with i + j = {k} is {sum}");
    }
    Ok(())
}

fn commutator_table() -> Outcome {
    let e = Engine::new(6, Convention::default());
    let x = |n| e.generator_x(n).unwrap();
    ensure!(x(1) == e.fgl_coeff(1, 1).unwrap(), "X1 != a[1,1]");
    ensure!(x(2) == e.fgl_coeff(1, 2).unwrap(), "X2 != a[1,2]");
    ensure!(x(3) == &e.fgl_coeff(2, 2).unwrap() - &e.fgl_coeff(1, 3).unwrap(), "X3 != -a[1,3] + a[2,2]");
    let sym = |s: &str| eval_symbolic(s, &e).unwrap();
    let cases = [
        (1, 2, "6*Ups[1,2]"),
        (1, 3, "4*phi[1](Ups[1,2]) + 4*Ups[1,3] + 8*Ups[1,2]*X1"),
        (
            2,
            3,
            "2*phi[1,1](Ups[1,2]) - 4*phi[1](Ups[1,3]) + 6*Ups[2,3] - 3*phi[1](Ups[1,2])*X1 + 2*Ups[1,3]*X1 \
             - 6*Ups[1,2]*X2 + Ups[1,2]*X1^2",
        ),
    ];
    for (i, j, rhs) in cases {
        let lhs = x(i).commutator(&x(j));
        ensure!(lhs == sym(rhs), "[X{i},X{j}] = {lhs}, display gives {}", sym(rhs));
    }
    // as printed, with X1 and X2 exchanged in two terms: not weight-homogeneous
    let printed = sym(
        "2*phi[1,1](Ups[1,2]) - 4*phi[1](Ups[1,3]) + 6*Ups[2,3] - 3*phi[1](Ups[1,2])*X1 + 2*Ups[1,3]*X2 \
         - 6*Ups[1,2]*X1 + Ups[1,2]*X1^2",
    );
    ensure!(!printed.is_homogeneous(), "printed [X2,X3] display is homogeneous");
    Ok(())
}

/// Accumulates `(exponents, coefficient expression)` into an expansion.
fn expansion_from(n: usize, order: i32, terms: &[(&[i32], &str)], e: &Engine) -> XExpansion {
    let mut x = XExpansion::zero(n, order);
    for (exps, c) in terms {
        x.add_term(Mono::from_slice(exps), &eval_symbolic(c, e).unwrap());
    }
    x
}

fn qsym_from(order: i32, terms: &[(&[usize], &str)], e: &Engine) -> QSymElement {
    let mut q = QSymElement::zero(order);
    for (i, c) in terms {
        q.add_term(Composition(i.to_vec()), &eval_symbolic(c, e).unwrap());
    }
    q
}

const U12: &str = "-Ups[1,2]";
const U13: &str = "-Ups[1,3]";
const U14: &str = "-Ups[1,4]";
const U15: &str = "-Ups[1,5]";
const U14_23: &str = "-Ups[1,4] - Ups[2,3]";
const SQ2: &str = "2*Ups[1,2]^2 - Ups[1,5] - Ups[2,4]";
const SQ6: &str = "6*Ups[1,2]^2 - Ups[1,5] - Ups[2,4]";
const MIX: &str = "Ups[1,2]^2 + phi[1](Ups[1,4]) - phi[3](Ups[1,2])";

fn vieta_chern() -> Outcome {
    let conv = Convention::default();
    let e = Engine::new(8, conv);
    let y2_want = expansion_from(
        2,
        7,
        &[
            (&[0, 1], "1"),
            (&[2, 2], U12),
            (&[3, 2], U13),
            (&[2, 3], U13),
            (&[4, 2], U14),
            (&[3, 3], U14_23),
            (&[2, 4], U14),
            (&[5, 2], U15),
            (&[4, 3], SQ2),
            (&[3, 4], SQ6),
            (&[2, 5], U15),
        ],
        &e,
    );
    let y2 = vieta(2, 7, conv).y[1].clone();
    ensure!(y2 == y2_want, "y2 differs:\n{}", y2.sub(&y2_want));

    let y3_want = expansion_from(
        3,
        7,
        &[
            (&[0, 0, 1], "1"),
            (&[2, 0, 2], U12),
            (&[0, 2, 2], U12),
            (&[3, 0, 2], U13),
            (&[2, 0, 3], U13),
            (&[0, 3, 2], U13),
            (&[0, 2, 3], U13),
            (&[3, 0, 3], U14_23),
            (&[2, 2, 2], "phi[1](Ups[1,3]) - phi[2](Ups[1,2])"),
            (&[4, 0, 2], U14),
            (&[2, 0, 4], U14),
            (&[0, 4, 2], U14),
            (&[0, 2, 4], U14),
            (&[0, 3, 3], U14_23),
            (&[0, 3, 4], "4*Ups[1,2]^2"),
            (&[5, 0, 2], U15),
            (&[4, 0, 3], SQ2),
            (&[3, 2, 2], MIX),
            (&[3, 0, 4], SQ6),
            (&[2, 3, 2], MIX),
            (&[2, 2, 3], MIX),
            (&[2, 0, 5], U15),
            (&[0, 5, 2], U15),
            (&[0, 2, 5], U15),
            (&[0, 4, 3], SQ2),
            (&[0, 3, 4], SQ2),
        ],
        &e,
    );
    let y3 = vieta(3, 7, conv).y[2].clone();
    ensure!(y3 == y3_want, "y3 differs:\n{}", y3.sub(&y3_want));

    let c2_want = qsym_from(
        8,
        &[
            (&[1, 1], "1"),
            (&[2, 3], U12),
            (&[3, 3], U13),
            (&[2, 4], U13),
            (&[4, 3], U14),
            (&[2, 5], U14),
            (&[3, 4], U14_23),
            (&[5, 3], U15),
            (&[2, 6], U15),
            (&[4, 4], SQ2),
            (&[3, 5], SQ2),
            (&[3, 5], "4*Ups[1,2]^2"),
        ],
        &e,
    );
    let c2 = chern(2, 2, 8, conv).map_err(err)?;
    ensure!(c2 == c2_want, "c2 = {c2}\nexpected {c2_want}");

    let mut c3_terms: Vec<(&[usize], &str)> = vec![(&[1, 1, 1], "1")];
    for i in [&[2, 3, 1][..], &[2, 1, 3], &[1, 2, 3]] {
        c3_terms.push((i, U12));
    }
    c3_terms.push((&[2, 2, 3], "-phi[1](Ups[1,2])"));
    for i in [&[3, 3, 1][..], &[3, 1, 3], &[2, 4, 1], &[2, 1, 4], &[1, 3, 3], &[1, 2, 4]] {
        c3_terms.push((i, U13));
    }
    for i in [&[4, 3, 1][..], &[4, 1, 3], &[2, 5, 1], &[2, 1, 5], &[1, 4, 3], &[1, 2, 5], &[3, 4, 1], &[3, 1, 4], &[1, 3, 4]]
    {
        c3_terms.push((i, U14));
    }
    for i in [&[3, 4, 1][..], &[3, 1, 4], &[1, 3, 4]] {
        c3_terms.push((i, "-Ups[2,3]"));
    }
    for i in [&[3, 2, 3][..], &[2, 3, 3]] {
        c3_terms.push((i, "-phi[2](Ups[1,2])"));
    }
    c3_terms.push((&[2, 2, 4], "-phi[1](Ups[1,3])"));
    let c3_want = qsym_from(8, &c3_terms, &e);
    let c3 = chern(3, 3, 8, conv).map_err(err)?;
    ensure!(c3 == c3_want, "c3 = {c3}\nexpected {c3_want}");
    Ok(())
}

/// `m_I` in `n` commuting variables as exponent vector -> coefficient.
fn commutative_monomial(i: &[usize], n: usize) -> BTreeMap<Vec<usize>, i64> {
    fn rec(i: &[usize], start: usize, n: usize, cur: &mut Vec<usize>, out: &mut BTreeMap<Vec<usize>, i64>) {
        let Some((&first, rest)) = i.split_first() else {
            *out.entry(cur.clone()).or_default() += 1;
            return;
        };
        for j in start..n {
            cur[j] = first;
            rec(rest, j + 1, n, cur, out);
            cur[j] = 0;
        }
    }
    let mut out = BTreeMap::new();
    rec(i, 0, n, &mut vec![0; n], &mut out);
    out
}

/// Classical `m_a m_b` by multiplying polynomials in commuting variables and
/// reading off the coefficients of the packed monomials.
fn classical_product(a: &[usize], b: &[usize]) -> BTreeMap<Vec<usize>, i64> {
    let n = a.len() + b.len();
    let (pa, pb) = (commutative_monomial(a, n), commutative_monomial(b, n));
    let mut prod: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for (ea, ca) in &pa {
        for (eb, cb) in &pb {
            let e: Vec<usize> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *prod.entry(e).or_default() += ca * cb;
        }
    }
    prod.into_iter()
        .filter(|(e, c)| {
            let k = e.iter().take_while(|&&x| x > 0).count();
            *c != 0 && e[k..].iter().all(|&x| x == 0)
        })
        .map(|(e, c)| (e.into_iter().filter(|&x| x > 0).collect(), c))
        .collect()
}

fn qsym_products() -> Outcome {
    let e = Engine::new(8, Convention::LITERAL);
    let m1 = QSymElement::monomial(&[1], 8);
    let prod = qsym_mul(&m1, &m1, 8).map_err(err)?;
    let mut want = QSymElement::monomial(&[2], 8);
    want.add_term(Composition(vec![1, 1]), &FreePoly::constant(Int::from(2)));
    for p in 1..=6 {
        for q in 1..=6 - p {
            want.add_term(Composition(vec![1 + p, 1 + q]), &e.upsilon(p, q).map_err(err)?);
        }
    }
    ensure!(prod == want, "m1*m1 = {prod}\nexpected {want}");

    let comps: Vec<Composition> = (1..=4).flat_map(compositions).collect();
    for a in &comps {
        for b in &comps {
            let s = a.size() + b.size();
            let p = qsym_mul(&QSymElement::monomial(&a.0, s as i32), &QSymElement::monomial(&b.0, s as i32), s)
                .map_err(err)?;
            let got: BTreeMap<Vec<usize>, i64> = specialize(&p)
                .terms
                .iter()
                .map(|(c, k)| (c.0.clone(), k.constant_term().to_string().parse::<i64>().unwrap()))
                .collect();
            let want = classical_product(&a.0, &b.0);
            ensure!(got == want, "{a}*{b}: specialization {got:?}, classical {want:?}");
        }
    }
    Ok(())
}

fn random_poly(rng: &mut ChaCha8Rng) -> FreePoly {
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut letters = Vec::new();
        let mut budget = rng.gen_range(1..=5usize);
        while budget > 0 {
            let k = rng.gen_range(1..=budget);
            letters.push(k);
            budget -= k;
        }
        let c = loop {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        terms.push((Word::new(&letters), Int::from(c)));
    }
    FreePoly::from_terms(terms)
}

fn hopf_suite() -> Outcome {
    let v = CoproductVariant::Corrected;
    let chi = Antipode::new(8);
    for n in 0..=8 {
        ensure!(coassociative(n, v), "coassociativity fails on phi{n}");
        ensure!(counital(n, v), "counit fails on phi{n}");
        ensure!(antipode_holds(n, &chi, v), "antipode fails on phi{n}");
    }
    let e = Engine::new(15, Convention::default());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let (a, b) = (random_poly(&mut rng), random_poly(&mut rng));
        let n = rng.gen_range(1..=5);
        ensure!(module_algebra_holds(n, &a, &b, v, &e).map_err(err)?, "coproduct route: phi{n}(({a})({b}))");
        // second route: sum_p phi_p(a) Q^{(1+p)}_{n-p}(b)
        let mut rhs = FreePoly::zero();
        for p in 0..=n {
            let q: BElement = q_poly(1 + p, n - p);
            rhs = rhs + &e.phi(p, &a).map_err(err)? * &act(&q, &b, &e).map_err(err)?;
        }
        let lhs = e.phi(n, &(&a * &b)).map_err(err)?;
        ensure!(lhs == rhs, "Q-polynomial route: phi{n}(({a})({b}))");
    }
    for n in 0..=5 {
        ensure!(comodule_power_holds(n, 10), "coaction on x^{n}");
    }
    ensure!(coaction_coassociative(v, 8), "coaction is not coassociative");
    ensure!(!coaction_coassociative(CoproductVariant::AsPrinted, 8), "printed coproduct unexpectedly passes");
    Ok(())
}

fn words_up_to(n_vars: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..n_vars).map(move |j| {
                    let mut v = w.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn braiding_axioms() -> Outcome {
    let e = Engine::new(8, Convention::default());
    for n in 1..=4 {
        let ctx = HurContext::new(n, 8);
        // every word of length <= n, which includes all permutations of the n variables
        for w in words_up_to(n, n) {
            ensure!(confluence_holds(&w, &e, &ctx).map_err(err)?, "confluence fails on {w:?}");
        }
    }
    let ctx2 = HurContext::new(2, 8);
    let target = ts_mul(&orientation_series(2, 1, 8), &orientation_series(2, 0, 8));
    ensure!(schauenburg_series(&e, 8).map_err(err)? == target, "Schauenburg composite != X(T2) X(T1)");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut x = XExpansion::zero(2, 8);
        for _ in 0..4 {
            let (a, b) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
            x.add_term(Mono::from_slice(&[a, b]), &random_poly(&mut rng).truncate_weight(8 - (a + b) as usize));
        }
        let once = braid_swap(&ctx2, &x).map_err(err)?;
        let twice = braid_swap(&ctx2, &once).map_err(err)?;
        ensure!(twice == x, "double swap is not the identity");
    }
    Ok(())
}

fn dimensions() -> Outcome {
    let u = convolution_dims(10);
    let g = generator_dims(5);
    for (w, want) in [(3, 1), (4, 2), (5, 5)] {
        ensure!(u[w] == Int::from(want), "convolution u{w} = {}", u[w]);
        ensure!(g[w] == Int::from(want), "generator count u{w} = {}", g[w]);
    }
    ensure!(graded_dims(10).is_ok(), "graded dims disagree");
    let p = partition_numbers(10);
    for w in 1..=10 {
        let s = (0..=w).map(|i| &p[i] * &u[w - i]).fold(Int::ZERO, |a, b| &a + &b);
        ensure!(s == Int::from(1i64 << (w - 1)), "convolution at weight {w} is {s}");
    }
    let e = Engine::new(8, Convention::default());
    for r in basis_check(8, &e).map_err(err)? {
        ensure!(r.ok(), "basis check fails at weight {}: rank {} of {}", r.weight, r.rank, r.monomials);
    }
    Ok(())
}

fn splitting() -> Outcome {
    for (conv, sign) in [(Convention::default(), 1i64), (Convention::LITERAL, -1)] {
        let b = splitting_b(8, conv);
        ensure!(b.get(&(0, 0)).is_some_and(|c| c.is_one()), "B[0,0] != 1");
        for n in 0..=8 {
            for m in 0..=8 - n {
                let c = b.get(&(n, m)).cloned().unwrap_or_default();
                let zn = if n == 0 { FreePoly::one() } else { FreePoly::gen(n) };
                let zm = if m == 0 { FreePoly::one() } else { FreePoly::gen(m) };
                if n + m > 0 {
                    let rest = &c - &zn.commutator(&zm).scale(&Int::from(sign));
                    ensure!(
                        rest.terms().iter().all(|(w, _)| w.len() >= 3),
                        "{}: B[{n},{m}] - [Z{n},Z{m}] has short words: {rest}",
                        conv.name()
                    );
                }
                ensure!(cotensor_defect(&c).is_empty(), "B[{n},{m}] is not in the cotensor product");
            }
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let run = |threads: &str, format: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_ncfgl"))
            .args(["reproduce-figures", "--format", format])
            .env("NCFGL_THREADS", threads)
            .output()
            .map_err(err)?;
        ensure!(o.status.success(), "reproduce-figures exited with {}", o.status);
        Ok(o.stdout)
    };
    for format in ["text", "json", "latex"] {
        let base = run("1", format)?;
        ensure!(!base.is_empty(), "no output");
        ensure!(run("1", format)? == base, "{format}: two single-thread runs differ");
        ensure!(run("4", format)? == base, "{format}: 1 and 4 threads differ");
        ensure!(run("16", format)? == base, "{format}: 1 and 16 threads differ");
    }
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { id: 1, name: "phi_k(Z_l) table", budget: secs(1), run: phi_table },
        Criterion { id: 2, name: "braiding table under the default convention", budget: secs(1), run: upsilon_table },
        Criterion { id: 3, name: "formal group law table", budget: secs(1), run: fgl_table },
        Criterion { id: 4, name: "relation suite at order 10", budget: secs(30), run: relation_suite },
        Criterion { id: 5, name: "commutator table", budget: secs(5), run: commutator_table },
        Criterion { id: 6, name: "Vieta coordinates and Chern classes", budget: secs(60), run: vieta_chern },
        Criterion { id: 7, name: "quasi-symmetric products", budget: secs(10), run: qsym_products },
        Criterion { id: 8, name: "Hopf suite", budget: secs(30), run: hopf_suite },
        Criterion { id: 9, name: "braiding axioms at order 8", budget: secs(60), run: braiding_axioms },
        Criterion { id: 10, name: "dimension bookkeeping", budget: secs(60), run: dimensions },
        Criterion { id: 11, name: "splitting coefficients", budget: secs(30), run: splitting },
        Criterion { id: 12, name: "reproduce-figures determinism", budget: secs(60), run: determinism },
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(()) if took > c.budget => Err(format!("over the {}s budget", c.budget.as_secs())),
            o => o,
        };
        let status = if outcome.is_ok() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {} ({:.2}s)", c.id, c.name, took.as_secs_f64());
        if let Err(msg) = outcome {
            failed += 1;
            for line in msg.lines() {
                println!("    {line}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
