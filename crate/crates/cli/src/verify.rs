//! The `verify` check suite: every structural claim about `K`, `H`, `K/H`,
//! and the walk operator, evaluated on the selected engines and collected
//! into a serializable report.

use serde::{Deserialize, Serialize};

use grover_walk::group::{identify_abelian_structure, is_normal, ClosureError, GroupElement};
use grover_walk::linalg::{
    build_g, build_s, build_u, check_diagonalization, conjugate_by_dft, min_power_to_identity,
    CycMatrix,
};
use grover_walk::walk_group::{
    exact_walk_group, monomial_walk_group, random_generator_words, words_agree_across_engines,
    WalkGroup,
};
use grover_walk::CycNum;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub n: u64,
    pub engine: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub const SCHEMA_VERSION: u32 = 1;
}

fn push(checks: &mut Vec<CheckResult>, name: impl Into<String>, passed: bool, details: String) {
    checks.push(CheckResult { name: name.into(), passed, details });
}

/// The group-theoretic half of the suite, run per engine.
fn group_checks<E: GroupElement>(engine: &str, wg: &WalkGroup<E>, checks: &mut Vec<CheckResult>) {
    let n = wg.n();
    let expected_h = 1usize << (n - 1);
    let h_order = wg.h().order();
    let involutory = wg.h().element_orders().iter().all(|&o| o <= 2);
    push(
        checks,
        format!("{engine}:subgroup_order"),
        h_order == expected_h && involutory,
        format!("|H| = {h_order} (expected {expected_h}), all orders <= 2: {involutory}"),
    );

    let normal = is_normal(wg.h(), wg.k());
    push(checks, format!("{engine}:normality"), normal, format!("H normal in K: {normal}"));

    match wg.quotient() {
        Err(err) => {
            push(checks, format!("{engine}:quotient_order"), false, err.to_string());
            push(checks, format!("{engine}:quotient_structure"), false, err.to_string());
            push(checks, format!("{engine}:coset_representatives"), false, err.to_string());
            push(checks, format!("{engine}:lagrange"), false, err.to_string());
        }
        Ok(q) => {
            let expected_q = if n.is_multiple_of(2) { 2 * n } else { n } as usize;
            push(
                checks,
                format!("{engine}:quotient_order"),
                q.order() == expected_q,
                format!("|K/H| = {} (expected {expected_q})", q.order()),
            );
            let structure = identify_abelian_structure(&q, n);
            let expected_name = if n.is_multiple_of(2) {
                format!("Z_{n} x Z_2")
            } else {
                format!("Z_{n}")
            };
            match structure {
                Ok(s) => push(
                    checks,
                    format!("{engine}:quotient_structure"),
                    s.to_string() == expected_name,
                    format!("identified {s} (expected {expected_name})"),
                ),
                Err(err) => push(
                    checks,
                    format!("{engine}:quotient_structure"),
                    false,
                    format!("identification failed: {err}"),
                ),
            }
            let reps = wg.coset_representative_check(&q);
            push(
                checks,
                format!("{engine}:coset_representatives"),
                reps,
                format!("claimed representative system covers all {} cosets: {reps}", q.order()),
            );
            let lagrange = q.order() * h_order == wg.k().order();
            push(
                checks,
                format!("{engine}:lagrange"),
                lagrange,
                format!("|K| = {} = |K/H| * |H| = {}", wg.k().order(), q.order() * h_order),
            );
        }
    }

    let membership = wg.membership_suite();
    push(
        checks,
        format!("{engine}:membership_facts"),
        membership.matches_expected,
        format!(
            "G in H = {} (n {}), S^j and S^jG all outside H: {}",
            membership.facts["G"],
            if n.is_multiple_of(2) { "even" } else { "odd" },
            membership.matches_expected
        ),
    );

    let swap = wg.coset_swap_check();
    push(
        checks,
        format!("{engine}:coset_swap"),
        swap,
        format!("S^j G^k H = G^k S^j H for all j, k: {swap}"),
    );

    let exponent = wg.minimal_common_exponent();
    push(
        checks,
        format!("{engine}:minimal_exponent"),
        exponent == 2 * n,
        format!("minimal common exponent {exponent} (expected {})", 2 * n),
    );

    let powers = wg.power_in_h_checks();
    push(
        checks,
        format!("{engine}:powers_in_h"),
        powers,
        format!("(S^j G)^n in H, with n minimal for SG and (SG)^n != I when n even: {powers}"),
    );
}

/// The exact-matrix half of the suite: generator relations, the commutator
/// diagonal form, the Fourier block diagonalization, and the walk
/// operator's minimal period.
fn matrix_checks(n: u64, checks: &mut Vec<CheckResult>) {
    let g = build_g(n);
    let s = build_s(n);

    let g_involutory = g.mat_pow(2).is_identity();
    let s_order = s.mat_pow(n).is_identity();
    let noncommuting = (1..n).all(|j| {
        let sj = s.mat_pow(j);
        g.matmul(&sj).unwrap() != sj.matmul(&g).unwrap()
    });
    push(
        checks,
        "generator_relations",
        g_involutory && s_order && noncommuting,
        format!("G^2 = I: {g_involutory}, S^n = I: {s_order}, G S^j != S^j G for all j: {noncommuting}"),
    );

    let mut comm_ok = true;
    for j in 1..n {
        let comm = s.mat_pow(j).commutator(&g).unwrap();
        if !comm.mat_pow(2).is_identity() {
            comm_ok = false;
            break;
        }
        let conjugated = conjugate_by_dft(&comm).unwrap();
        let expected = CycMatrix::from_fn(n, n as usize, |r, c| {
            if r != c {
                CycNum::zero(n)
            } else if r == 0 || r == j as usize {
                CycNum::from_integer(n, -1)
            } else {
                CycNum::one(n)
            }
        });
        if conjugated != expected {
            comm_ok = false;
            break;
        }
    }
    push(
        checks,
        "commutator_diagonal_form",
        comm_ok,
        format!("[S^j, G] involutory and diagonal with -1 at 1 and j+1 after conjugation: {comm_ok}"),
    );

    let diag = check_diagonalization(n);
    push(
        checks,
        "diagonalization",
        diag,
        format!("Fourier conjugation of U equals diag(G, SG, ..., S^(n-1)G): {diag}"),
    );

    let period = min_power_to_identity(&build_u(n), 2 * n);
    push(
        checks,
        "walk_operator_period",
        period == Some(2 * n),
        format!("minimal m with U^m = I is {period:?} (expected Some({}))", 2 * n),
    );
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnginePlan {
    MonomialOnly,
    ExactOnly,
    Both,
}

/// Runs the selected engines' suites for one `n`. The cross-engine
/// agreement check samples `word_sample` random generator words.
pub fn run_verify(
    n: u64,
    plan: EnginePlan,
    seed: u64,
    max_elements: usize,
    word_sample: usize,
) -> Result<VerificationReport, ClosureError> {
    let start = std::time::Instant::now();
    let mut checks = Vec::new();

    let monomial = match plan {
        EnginePlan::MonomialOnly | EnginePlan::Both => Some(monomial_walk_group(n, max_elements)?),
        EnginePlan::ExactOnly => None,
    };
    let exact = match plan {
        EnginePlan::ExactOnly | EnginePlan::Both => Some(exact_walk_group(n, max_elements)?),
        EnginePlan::MonomialOnly => None,
    };

    if let Some(wg) = &monomial {
        group_checks("monomial", wg, &mut checks);
    }
    if let Some(wg) = &exact {
        group_checks("exact", wg, &mut checks);
    }
    // structural matrix checks ride along whenever the exact engine is in play
    if exact.is_some() {
        matrix_checks(n, &mut checks);
    }
    if let (Some(fast), Some(slow)) = (&monomial, &exact) {
        let sizes_match =
            fast.k().order() == slow.k().order() && fast.h().order() == slow.h().order();
        let words = random_generator_words(word_sample, 30, seed);
        let words_ok = words_agree_across_engines(n, &words);
        push(
            &mut checks,
            "engine_agreement",
            sizes_match && words_ok,
            format!(
                "closure sizes match: {sizes_match}, {word_sample} random words agree: {words_ok}"
            ),
        );
    }

    let all_passed = checks.iter().all(|c| c.passed);
    Ok(VerificationReport {
        schema_version: VerificationReport::SCHEMA_VERSION,
        n,
        engine: match plan {
            EnginePlan::MonomialOnly => "monomial".to_string(),
            EnginePlan::ExactOnly => "exact".to_string(),
            EnginePlan::Both => "both".to_string(),
        },
        seed,
        checks,
        all_passed,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
