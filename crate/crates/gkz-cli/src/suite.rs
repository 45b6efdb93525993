//! The bundled reproduction suite: three small configurations whose
//! invariants (kernels, volumes, slopes by both routes, quotient orders,
//! series annihilation, irregularity dimensions) are checked exactly and
//! reported as a pass/fail table.

use gkz::exact::{parse_rat, rat, rat_int, Int, Rat};
use gkz::irregularity;
use gkz::series::{self, OperatorSpec};
use gkz::{geometry, slopes, IntMatrix};

pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

fn check(name: &str, expected: impl ToString, got: impl ToString) -> Check {
    let expected = expected.to_string();
    let got = got.to_string();
    let pass = expected == got;
    Check {
        name: name.into(),
        expected,
        got,
        pass,
    }
}

fn fmt_sets(sets: &[Vec<usize>]) -> String {
    let parts: Vec<String> = sets
        .iter()
        .map(|s| {
            let inner: Vec<String> = s.iter().map(|i| (i + 1).to_string()).collect();
            format!("{{{}}}", inner.join(","))
        })
        .collect();
    format!("[{}]", parts.join(" "))
}

fn fmt_rats(rs: &[Rat]) -> String {
    let parts: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

pub fn bundled_pointed_2x3() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 2, 1]])
}

pub fn bundled_nonpointed_2x4() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, 0, -3, 2], vec![-1, 1, -2, 2]])
}

pub fn bundled_gap_2x3() -> IntMatrix {
    IntMatrix::from_rows(&[vec![1, 0, 3], vec![0, 1, -1]])
}

pub fn run() -> gkz::Result<Vec<Check>> {
    let mut checks = Vec::new();

    // pointed 2x3 configuration
    let a = bundled_pointed_2x3();
    let kernel = gkz::exact::kernel_basis(&a)?;
    checks.push(check(
        "pointed-2x3: kernel basis",
        "[(6,1,-2)]",
        format!(
            "[{}]",
            kernel
                .iter()
                .map(|u| {
                    let s: Vec<String> = u.iter().map(|x| x.to_string()).collect();
                    format!("({})", s.join(","))
                })
                .collect::<Vec<_>>()
                .join(" ")
        ),
    ));
    checks.push(check(
        "pointed-2x3: vol {1,2}",
        "2",
        geometry::normalized_volume(&a, &[0, 1])?.to_string(),
    ));
    checks.push(check(
        "pointed-2x3: vol {1,2,3}",
        "7",
        geometry::normalized_volume(&a, &[0, 1, 2])?.to_string(),
    ));
    let t = geometry::regular_triangulation(&a, &vec![rat_int(1); 3])?;
    checks.push(check(
        "pointed-2x3: triangulation at ones",
        "[{1,3} {2,3}]",
        fmt_sets(&t.maximal_simplices),
    ));
    let report = slopes::slopes_along_hyperplane(&a, 2)?;
    checks.push(check(
        "pointed-2x3: slopes along x3",
        "[7/2] cross-check pass",
        format!(
            "{} cross-check {}",
            fmt_rats(&report.slopes),
            if report.cross_check { "pass" } else { "fail" }
        ),
    ));
    let beta = vec![rat(1, 2), rat(1, 3)];
    let s0 = series::gamma_series_truncated(&a, &[0, 1], &beta, &[Int::from(0)], 30)?;
    let coeffs_ok = s0.terms.iter().enumerate().all(|(m, term)| {
        let mut expect = series::pochhammer(&rat(1, 2), 6 * m as u64);
        expect *= series::pochhammer(&rat(1, 6), m as u64);
        let mut fact = rat_int(1);
        for j in 1..=(2 * m as u64) {
            fact *= Rat::from_integer(Int::from(j));
        }
        term.coeff == expect / fact
    });
    checks.push(check(
        "pointed-2x3: series coefficients (N=30)",
        "exact",
        if coeffs_ok { "exact" } else { "mismatch" },
    ));
    let s20 = series::gamma_series_truncated(&a, &[0, 1], &beta, &[Int::from(0)], 20)?;
    let euler_ok = (0..2).all(|row| {
        let op = OperatorSpec::euler(&a, &beta, row).unwrap();
        let out = series::apply_operator(&s20, &op);
        out.reliable.is_empty() && out.tail.is_empty()
    });
    let toric_ok = {
        let op = OperatorSpec::toric(&a, vec![Int::from(6), Int::from(1), Int::from(-2)]).unwrap();
        series::apply_operator(&s20, &op).annihilated_on_reliable()
    };
    checks.push(check(
        "pointed-2x3: annihilation (N=20)",
        "euler exact, toric reliable",
        match (euler_ok, toric_ok) {
            (true, true) => "euler exact, toric reliable".into(),
            (e, t) => format!("euler {e}, toric {t}"),
        },
    ));
    let irr2 = irregularity::irregularity_dimension_hyperplane(&a, 2, &rat_int(2))?;
    let irr4 = irregularity::irregularity_dimension_hyperplane(&a, 2, &rat_int(4))?;
    checks.push(check(
        "pointed-2x3: irregularity along x3 at s=2,4",
        "0,2",
        format!("{irr2},{irr4}"),
    ));

    // non-pointed 2x4 configuration
    let a = bundled_nonpointed_2x4();
    checks.push(check(
        "nonpointed-2x4: pointed",
        "false",
        geometry::is_pointed(&a).to_string(),
    ));
    let q = gkz::exact::quotient_group(&a, &[2, 3])?;
    checks.push(check("nonpointed-2x4: [ZA : Z{3,4}]", "2", q.order));
    let report = slopes::slopes_along_hyperplane(&a, 1)?;
    checks.push(check(
        "nonpointed-2x4: slopes along x2",
        "[5/2] cross-check pass",
        format!(
            "{} cross-check {}",
            fmt_rats(&report.slopes),
            if report.cross_check { "pass" } else { "fail" }
        ),
    ));
    let report = slopes::slopes_along_hyperplane(&a, 3)?;
    checks.push(check(
        "nonpointed-2x4: slopes along x4",
        "[6] cross-check pass",
        format!(
            "{} cross-check {}",
            fmt_rats(&report.slopes),
            if report.cross_check { "pass" } else { "fail" }
        ),
    ));

    // 2x3 configuration with the codimension-two gap
    let a = bundled_gap_2x3();
    let report = slopes::candidate_indices_along_subspace(&a, &[0])?;
    checks.push(check(
        "gap-2x3: candidates along {x2=x3=0}",
        "[3/2] realized [] gap [3/2]",
        format!(
            "{} realized {} gap {}",
            fmt_rats(&report.candidates),
            fmt_rats(
                &report
                    .realized
                    .iter()
                    .map(|w| w.s0.clone())
                    .collect::<Vec<_>>()
            ),
            fmt_rats(&report.gaps),
        ),
    ));
    let beta = vec![parse_rat("3")?, parse_rat("-1")?];
    let rep = series::minimal_negative_support_rep(&a, &[0, 1], &beta, &[Int::from(0)], 50)?;
    checks.push(check(
        "gap-2x3: minimal-support shift for beta=(3,-1)",
        "k=(1) certified",
        format!(
            "k=({}) {}",
            rep.k
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
            if rep.certified {
                "certified"
            } else {
                "uncertified"
            }
        ),
    ));
    let s = series::gamma_series_truncated(&a, &[0, 1], &beta, &rep.k, 12)?;
    let euler_ok = (0..2).all(|row| {
        let op = OperatorSpec::euler(&a, &beta, row).unwrap();
        let out = series::apply_operator(&s, &op);
        out.reliable.is_empty() && out.tail.is_empty()
    });
    let toric_ok = {
        let op = OperatorSpec::toric(&a, vec![Int::from(-3), Int::from(1), Int::from(1)]).unwrap();
        series::apply_operator(&s, &op).annihilated_on_reliable()
    };
    checks.push(check(
        "gap-2x3: annihilation at the shifted base (N=12)",
        "euler exact, toric reliable",
        match (euler_ok, toric_ok) {
            (true, true) => "euler exact, toric reliable".into(),
            (e, t) => format!("euler {e}, toric {t}"),
        },
    ));

    Ok(checks)
}
