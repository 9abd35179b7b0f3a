//! The verification engine: Sturm trace bounds, mod-p vanishing checks,
//! theta-kernel and mod-p-singularity verdicts, and the registry of named
//! congruence checks.
//!
//! A check comes back as one of three verdicts.  `ProvedViaSturm` means the
//! residues vanish up to the Sturm trace bound for the effective weight and
//! the theorem's hypotheses hold (supported field, symmetric expansion,
//! matching character), so the congruence holds at every index.
//! `CheckedToBound` means every stored residue vanishes but some hypothesis
//! is unavailable, so the statement is only verified up to the carried
//! trace bound.  `Refuted` carries a witness index and its residue.
//!
//! Witness selection: vanishing and singularity checks report the
//! lexicographically first violated index (as the canonical representative
//! of its unit/transposition class); theta-kernel checks order violations
//! by scaled determinant first, the quantity the theta operator weights.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use num::traits::Zero;

use crate::graded_ring::RingData;
use crate::krieg::{self, KriegParams};
use crate::lambda2::HermIndex;
use crate::number_theory::{p_valuation, rat, ratio, QuadField};
use crate::qseries::{EllipticQExp, FourierExpansion, QSeriesError};
use crate::tables;
use crate::theta;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CongruenceError {
    NotPIntegral { prime: u64, at: HermIndex },
    InsufficientBound { required: i64, have: i64 },
    PrimeDividesDiscriminant { prime: u64, disc: i64 },
}

impl fmt::Display for CongruenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceError::NotPIntegral { prime, at } => {
                write!(f, "coefficient at {at} is not {prime}-integral")
            }
            CongruenceError::InsufficientBound { required, have } => {
                write!(
                    f,
                    "trace bound {have} is below the required Sturm bound {required}"
                )
            }
            CongruenceError::PrimeDividesDiscriminant { prime, disc } => {
                write!(f, "prime {prime} divides the discriminant {disc}")
            }
        }
    }
}

impl std::error::Error for CongruenceError {}

impl From<QSeriesError> for CongruenceError {
    fn from(e: QSeriesError) -> Self {
        match e {
            QSeriesError::NotPIntegral { prime, at } => CongruenceError::NotPIntegral { prime, at },
            other => panic!("unexpected expansion error in congruence check: {other}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    ProvedViaSturm,
    CheckedToBound,
    Refuted,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerdictStatus::ProvedViaSturm => write!(f, "proved-via-sturm"),
            VerdictStatus::CheckedToBound => write!(f, "checked-to-bound"),
            VerdictStatus::Refuted => write!(f, "refuted"),
        }
    }
}

/// Outcome of a mod-p verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    /// Violated index and its residue; present exactly for refutations.
    pub witness: Option<(HermIndex, u64)>,
    pub bound_used: i64,
    pub prime: u64,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        self.status != VerdictStatus::Refuted
    }
}

/// Sturm trace bound 2*floor(k/8) over Q(i), 2*floor(k/9) over Q(sqrt(3)i);
/// None signals that only checked-to-bound verdicts are possible.
pub fn sturm_trace_bound(weight: i64, field: &QuadField) -> Option<i64> {
    assert!(weight >= 0);
    match field.disc() {
        -4 => Some(2 * (weight / 8)),
        -3 => Some(2 * (weight / 9)),
        _ => None,
    }
}

/// Does the character exponent match the symmetric-space hypothesis nu_k of
/// the Sturm theorem?  Over Q(i) nu_k = det^(k/2) and det^2 acts trivially,
/// so only the parity of the exponent matters; over Q(sqrt(3)i) nu_k =
/// det^k with det of order 6.
fn char_matches_hypothesis(field: &QuadField, tag: i64, weight: i64) -> bool {
    match field.disc() {
        -4 => (tag - weight / 2).rem_euclid(2) == 0,
        -3 => (tag - weight).rem_euclid(6) == 0,
        _ => false,
    }
}

fn lex_key(field: &QuadField, h: &HermIndex) -> (i64, i64, i64, i64) {
    if field.disc() == -4 {
        (h.trace(), h.m, h.a(), h.b())
    } else {
        (h.trace(), h.m, h.x, h.y)
    }
}

/// Pick the reported witness among violated indices.  Violations are
/// identified with their canonical class representatives; `by_ndet` orders
/// by scaled determinant first (theta-kernel checks), otherwise pure lex.
fn pick_witness(
    field: &QuadField,
    violations: &[(HermIndex, u64)],
    by_ndet: bool,
) -> Option<(HermIndex, u64)> {
    let mut best: Option<(HermIndex, u64)> = None;
    for (h, r) in violations {
        let rep = field.canonical_rep(h);
        let r_rep = violations
            .iter()
            .find(|(k, _)| *k == rep)
            .map(|(_, res)| *res)
            .unwrap_or(*r);
        let key = |x: &HermIndex| {
            if by_ndet {
                (field.ndet(x), lex_key(field, x))
            } else {
                (0, lex_key(field, x))
            }
        };
        let better = match &best {
            None => true,
            Some((cur, _)) => key(&rep) < key(cur),
        };
        if better {
            best = Some((rep, r_rep));
        }
    }
    best
}

/// Is F = 0 mod p?  `k_eff` is the effective weight the caller attaches to
/// F for the Sturm bound (for theta images, source weight + p + 1).
pub fn verify_zero_mod_p(
    f: &FourierExpansion,
    p: u64,
    k_eff: i64,
) -> Result<Verdict, CongruenceError> {
    assert!(p >= 2);
    let residues = f.reduce_mod(p)?;
    let violations: Vec<(HermIndex, u64)> = residues
        .iter()
        .filter(|(_, r)| **r != 0)
        .map(|(h, r)| (*h, *r))
        .collect();
    if !violations.is_empty() {
        return Ok(Verdict {
            status: VerdictStatus::Refuted,
            witness: pick_witness(&f.field, &violations, false),
            bound_used: f.trace_bound,
            prime: p,
        });
    }
    let hypothesis_ok = p >= 5
        && f.symmetric
        && match (f.theta_image_of, f.char_tag) {
            // Theta image: the weight-raising theorem supplies the effective
            // weight and character, provided the source had the symmetric
            // character and p is unramified.
            (Some(k), Some(tag)) => {
                k_eff == k + (p as i64) + 1
                    && f.field.disc_abs() % (p as i64) != 0
                    && char_matches_hypothesis(&f.field, tag, k)
            }
            (None, Some(tag)) => char_matches_hypothesis(&f.field, tag, k_eff),
            _ => false,
        };
    if hypothesis_ok {
        if let Some(sb) = sturm_trace_bound(k_eff, &f.field) {
            if f.trace_bound >= sb {
                return Ok(Verdict {
                    status: VerdictStatus::ProvedViaSturm,
                    witness: None,
                    bound_used: sb,
                    prime: p,
                });
            }
        }
    }
    Ok(Verdict {
        status: VerdictStatus::CheckedToBound,
        witness: None,
        bound_used: f.trace_bound,
        prime: p,
    })
}

/// Is Theta(F) = 0 mod p?  The image is checked at effective weight
/// k + p + 1.  Refutation witnesses are ordered by scaled determinant.
pub fn theta_kernel_verify(f: &FourierExpansion, p: u64) -> Result<Verdict, CongruenceError> {
    assert!(p >= 5, "the theta-kernel theorems need p >= 5");
    if f.field.disc_abs() % (p as i64) == 0 {
        return Err(CongruenceError::PrimeDividesDiscriminant {
            prime: p,
            disc: f.field.disc(),
        });
    }
    let k_eff = f.weight + p as i64 + 1;
    if let Some(sb) = sturm_trace_bound(k_eff, &f.field) {
        if f.trace_bound < sb {
            return Err(CongruenceError::InsufficientBound {
                required: sb,
                have: f.trace_bound,
            });
        }
    }
    let image = f.theta_op();
    let residues = image.reduce_mod(p)?;
    let violations: Vec<(HermIndex, u64)> = residues
        .iter()
        .filter(|(_, r)| **r != 0)
        .map(|(h, r)| (*h, *r))
        .collect();
    if !violations.is_empty() {
        return Ok(Verdict {
            status: VerdictStatus::Refuted,
            witness: pick_witness(&f.field, &violations, true),
            bound_used: f.trace_bound,
            prime: p,
        });
    }
    verify_zero_mod_p(&image, p, k_eff)
}

/// Are all rank-2 coefficients of F divisible by p?  No Sturm statement is
/// claimed for singularity, so passing verdicts are checked-to-bound.
pub fn mod_p_singular_verify(f: &FourierExpansion, p: u64) -> Result<Verdict, CongruenceError> {
    let residues = f.reduce_mod(p)?;
    let violations: Vec<(HermIndex, u64)> = residues
        .iter()
        .filter(|(h, r)| **r != 0 && f.field.ndet(h) > 0)
        .map(|(h, r)| (*h, *r))
        .collect();
    if !violations.is_empty() {
        return Ok(Verdict {
            status: VerdictStatus::Refuted,
            witness: pick_witness(&f.field, &violations, false),
            bound_used: f.trace_bound,
            prime: p,
        });
    }
    Ok(Verdict {
        status: VerdictStatus::CheckedToBound,
        witness: None,
        bound_used: f.trace_bound,
        prime: p,
    })
}

/// One entry of a verification report.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub id: &'static str,
    pub description: &'static str,
    pub verdict: Option<Verdict>,
    pub passed: bool,
    pub skipped: Option<String>,
    pub millis: u128,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct CheckReport {
    pub entries: Vec<CheckResult>,
}

impl CheckReport {
    /// True when every executed (non-skipped) check passed.
    pub fn all_passed(&self) -> bool {
        self.entries.iter().all(|e| e.skipped.is_some() || e.passed)
    }

    pub fn render_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<22} {:<8} {:<18} {:>7}  {}\n",
            "check", "result", "verdict", "ms", "detail"
        ));
        for e in &self.entries {
            let result = match (&e.skipped, e.passed) {
                (Some(_), _) => "skip",
                (None, true) => "pass",
                (None, false) => "FAIL",
            };
            let verdict = e
                .verdict
                .as_ref()
                .map(|v| v.status.to_string())
                .unwrap_or_else(|| "-".to_string());
            let detail = e.skipped.clone().unwrap_or_else(|| e.detail.clone());
            out.push_str(&format!(
                "{:<22} {:<8} {:<18} {:>7}  {}\n",
                e.id, result, verdict, e.millis, detail
            ));
        }
        out
    }

    pub fn render_records(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let status = match (&e.skipped, e.passed) {
                (Some(_), _) => "skip",
                (None, true) => "pass",
                (None, false) => "fail",
            };
            let (verdict, witness, bound, prime) = match &e.verdict {
                Some(v) => (
                    v.status.to_string(),
                    v.witness
                        .map(|(h, r)| format!("{}:{r}", h.render_qi()))
                        .unwrap_or_else(|| "-".to_string()),
                    v.bound_used.to_string(),
                    v.prime.to_string(),
                ),
                None => ("-".into(), "-".into(), "-".into(), "-".into()),
            };
            out.push_str(&format!(
                "id={} status={status} verdict={verdict} witness={witness} bound={bound} prime={prime} ms={}\n",
                e.id, e.millis
            ));
        }
        out
    }
}

/// Options for the registry run.
#[derive(Debug, Clone)]
pub struct CheckOptions {
    /// Load external Gram files (rank-8 representatives); checks that need
    /// them are skipped cleanly when disabled or absent.
    pub use_external_data: bool,
    pub external_dir: Option<PathBuf>,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            use_external_data: true,
            external_dir: None,
        }
    }
}

type CheckFn<'a> = Box<dyn FnOnce() -> Result<(Option<Verdict>, String), String> + 'a>;

fn expect_status(
    v: Result<Verdict, CongruenceError>,
    want: VerdictStatus,
    label: &str,
) -> Result<(Option<Verdict>, String), String> {
    let v = v.map_err(|e| e.to_string())?;
    if v.status == want {
        Ok((Some(v), label.to_string()))
    } else {
        Err(format!(
            "{label}: expected {want}, got {} (witness {:?})",
            v.status, v.witness
        ))
    }
}

/// Run the full registry of named checks.  The ring data must carry trace
/// bound at least 6 (the largest Sturm bound any check needs).
pub fn run_named_checks(ring: &RingData, opts: &CheckOptions) -> CheckReport {
    assert!(
        ring.trace_bound >= 6,
        "registry needs generators at trace bound >= 6, got {}",
        ring.trace_bound
    );
    let qi = QuadField::gaussian();
    let e4sq = ring.gens.e4.mul(&ring.gens.e4).expect("same field");
    let theta_h1 =
        FourierExpansion::linear_combine(&[(rat(1), &e4sq), (rat(-5760), &ring.gens.chi8)])
            .expect("weight 8");
    let theta_h2 =
        FourierExpansion::linear_combine(&[(rat(1), &e4sq), (rat(-3072), &ring.gens.chi8)])
            .expect("weight 8");

    let external = load_external_grams(opts);

    let mut report = CheckReport::default();
    let mut run = |id: &'static str, description: &'static str, f: CheckFn| {
        let start = Instant::now();
        let (verdict, passed, detail, skipped) = match f() {
            Ok((v, d)) => (v, true, d, None),
            Err(msg) => {
                if let Some(reason) = msg.strip_prefix("SKIP:") {
                    (None, true, String::new(), Some(reason.trim().to_string()))
                } else {
                    (None, false, msg, None)
                }
            }
        };
        report.entries.push(CheckResult {
            id,
            description,
            verdict,
            passed,
            skipped,
            millis: start.elapsed().as_millis(),
            detail,
        });
    };

    run(
        "krieg-phi",
        "Siegel operator sends F_k to the elliptic Eisenstein series (k = 4, 8, 12; t <= 8)",
        Box::new(|| {
            for k in [4i64, 8, 12] {
                let f = krieg::krieg_expansion(&KriegParams::new(qi, k), 8);
                let ell = EllipticQExp::eisenstein(k, 8);
                if !f.siegel_phi().agrees_with(&ell, 8) {
                    return Err(format!("Phi(F_{k}) differs from E_{k}"));
                }
            }
            Ok((None, "k in {4, 8, 12}, t <= 8".into()))
        }),
    );

    run(
        "krieg-hand-values",
        "hand-derived weight-4 coefficients at [1,0,1] and [1,1+i,1]",
        Box::new(|| {
            let p4 = KriegParams::new(qi, 4);
            let a1 = krieg::krieg_coeff(&p4, &HermIndex::from_ab(1, 0, 0, 1));
            let a2 = krieg::krieg_coeff(&p4, &HermIndex::from_ab(1, 1, 1, 1));
            if a1 != rat(14400) || a2 != rat(2880) {
                return Err(format!("got {a1} and {a2}, want 14400 and 2880"));
            }
            Ok((None, "14400 and 2880".into()))
        }),
    );

    run(
        "table1-columns",
        "rank-8 theta columns via E_4^2 - 5760 chi_8 and E_4^2 - 3072 chi_8 match all 22 rows",
        Box::new(|| {
            let diffs = tables::check_table1(&theta_h1, &theta_h2);
            if diffs.is_empty() {
                Ok((
                    None,
                    format!("{} rows x 2 columns", tables::table1_rows().len()),
                ))
            } else {
                Err(format!("{} mismatches, first: {}", diffs.len(), diffs[0]))
            }
        }),
    );

    run(
        "table1-enumeration",
        "direct short-vector enumeration of external rank-8 Gram matrices matches the low-trace rows",
        Box::new(|| {
            let Some(grams) = &external else {
                return Err("SKIP: external rank-8 Gram files not available".into());
            };
            for (g, combo, col) in [(&grams.h1, &theta_h1, 0usize), (&grams.h2, &theta_h2, 1)] {
                let th = theta::theta_series(g, 2).map_err(|e| e.to_string())?;
                for row in tables::table1_rows() {
                    if row.index.trace() > 2 {
                        continue;
                    }
                    let want = rat(row.values[col]);
                    if th.coeff(&row.index) != want {
                        return Err(format!(
                            "enumerated a({}; {}) = {} differs from table value {}",
                            g.label,
                            row.index.render_qi(),
                            th.coeff(&row.index),
                            want
                        ));
                    }
                    if th.coeff(&row.index) != combo.coeff(&row.index) {
                        return Err("enumeration disagrees with the span combination".into());
                    }
                }
            }
            Ok((None, "rows with tr <= 2".into()))
        }),
    );

    run(
        "mass-formula",
        "genus mass identity: the weighted theta average equals (61 / 2^22 3^5 5 7) E_8",
        Box::new(|| {
            // span form: theta_Hi = E_4^2 - c_i chi_8 with c = (5760, 3072, 0)
            let theta_h3 = e4sq.clone();
            let a1 = ratio(1, 1 << 15) * ratio(1, 243) * ratio(1, 25) * ratio(1, 7);
            let a2 = ratio(1, 1 << 22) * ratio(1, 9) * ratio(1, 5) * ratio(1, 7);
            let a3 = ratio(1, 1 << 21) * ratio(1, 81) * ratio(1, 25);
            let lhs = FourierExpansion::linear_combine(&[
                (a1, &theta_h1),
                (a2, &theta_h2),
                (a3, &theta_h3),
            ])
            .expect("weight 8");
            let mass = ratio(61, 1 << 22) * ratio(1, 243) * ratio(1, 5) * ratio(1, 7);
            let rhs = ring.e8.scaled(&mass);
            if lhs.agrees_with(&rhs, ring.trace_bound) {
                Ok((None, format!("exact to trace {}", ring.trace_bound)))
            } else {
                Err("mass identity failed".into())
            }
        }),
    );

    run(
        "mass-enumeration",
        "mass identity from directly enumerated external Gram matrices (trace <= 4)",
        Box::new(|| {
            let Some(grams) = &external else {
                return Err("SKIP: external rank-8 Gram files not available".into());
            };
            let t1 = theta::theta_series(&grams.h1, 4).map_err(|e| e.to_string())?;
            let t2 = theta::theta_series(&grams.h2, 4).map_err(|e| e.to_string())?;
            let t3 = theta::theta_series(&grams.h3, 4).map_err(|e| e.to_string())?;
            let a1 = ratio(1, 1 << 15) * ratio(1, 243) * ratio(1, 25) * ratio(1, 7);
            let a2 = ratio(1, 1 << 22) * ratio(1, 9) * ratio(1, 5) * ratio(1, 7);
            let a3 = ratio(1, 1 << 21) * ratio(1, 81) * ratio(1, 25);
            let lhs = FourierExpansion::linear_combine(&[(a1, &t1), (a2, &t2), (a3, &t3)])
                .expect("weight 8");
            let mass = ratio(61, 1 << 22) * ratio(1, 243) * ratio(1, 5) * ratio(1, 7);
            if lhs.agrees_with(&ring.e8.scaled(&mass), 4) {
                Ok((None, "exact to trace 4".into()))
            } else {
                Err("enumerated mass identity failed".into())
            }
        }),
    );

    run(
        "psi4-calibration",
        "theta-constant calibration: psi_4 equals E_4 exactly",
        Box::new(|| {
            let psi4 = theta::psi_series(4, ring.trace_bound).map_err(|e| e.to_string())?;
            if psi4.agrees_with(&ring.gens.e4, ring.trace_bound) {
                Ok((None, format!("kappa = {}", ring.kappa)))
            } else {
                Err("psi_4 differs from E_4".into())
            }
        }),
    );

    run(
        "psi8-relation",
        "psi_8 = (14/75) E_4^2 + (61/75) E_8 exactly",
        Box::new(|| {
            let rhs = FourierExpansion::linear_combine(&[
                (ratio(14, 75), &e4sq),
                (ratio(61, 75), &ring.e8),
            ])
            .expect("weight 8");
            if ring.psi8.agrees_with(&rhs, ring.trace_bound) {
                Ok((None, format!("exact to trace {}", ring.trace_bound)))
            } else {
                Err("psi_8 relation failed".into())
            }
        }),
    );

    run(
        "table2-leech",
        "Leech theta series matches all 29 table rows and vanishes elsewhere (rank 2, tr <= 6)",
        Box::new(|| {
            let diffs = tables::check_table2(&ring.theta_leech);
            if diffs.is_empty() {
                Ok((
                    None,
                    format!("{} rows + vanishing", tables::table2_rows().len()),
                ))
            } else {
                Err(format!("{} mismatches, first: {}", diffs.len(), diffs[0]))
            }
        }),
    );

    run(
        "mod7-theta1",
        "Theta(theta_H1) = 0 mod 7",
        Box::new(|| {
            expect_status(
                theta_kernel_verify(&theta_h1, 7),
                VerdictStatus::ProvedViaSturm,
                "Sturm bound 4",
            )
        }),
    );
    run(
        "mod7-theta2",
        "Theta(theta_H2) = 0 mod 7",
        Box::new(|| {
            expect_status(
                theta_kernel_verify(&theta_h2, 7),
                VerdictStatus::ProvedViaSturm,
                "Sturm bound 4",
            )
        }),
    );

    run(
        "mod11cong-1",
        "Theta(theta_Leech) = 0 mod 11",
        Box::new(|| {
            expect_status(
                theta_kernel_verify(&ring.theta_leech, 11),
                VerdictStatus::ProvedViaSturm,
                "Sturm bound 6 at effective weight 24",
            )
        }),
    );

    run(
        "mod11cong-2",
        "theta_Leech = 1 mod 13 (difference with E_12 via Sturm, E_12 = 1 coefficientwise)",
        Box::new(|| {
            let diff = ring.theta_leech.sub(&ring.e12).map_err(|e| e.to_string())?;
            let (v, _) = expect_status(
                verify_zero_mod_p(&diff, 13, 12),
                VerdictStatus::ProvedViaSturm,
                "",
            )?;
            // E_12 = 1 mod 13 on the carried support
            let one = FourierExpansion::one(qi, ring.trace_bound);
            let e12m1 =
                FourierExpansion::linear_combine_mixed(&[(rat(1), &ring.e12), (rat(-1), &one)])
                    .expect("same field");
            let resid = e12m1.reduce_mod(13).map_err(|e| e.to_string())?;
            if let Some((h, r)) = resid.iter().find(|(_, r)| **r != 0) {
                return Err(format!("E_12 - 1 has residue {r} at {}", h.render_qi()));
            }
            Ok((v, "theta_Leech = E_12 = 1 mod 13".into()))
        }),
    );

    run(
        "phi-leech",
        "Phi(theta_Leech) = (E_4)^3 - 720 Delta as one-variable expansions to q^8",
        Box::new(|| {
            // rank-1 column to q^8 through the one-variable theta route
            let [a1, a2, a3, a4] = crate::graded_ring::leech_relation_coeffs();
            let phi_psi12 = theta::psi_phi_qexp(12, 8).map_err(|e| e.to_string())?;
            let e4 = EllipticQExp::eisenstein(4, 8);
            let e8 = EllipticQExp::eisenstein(8, 8);
            let e12 = EllipticQExp::eisenstein(12, 8);
            let e4cube = e4.mul(&e4).mul(&e4);
            let mut lhs = phi_psi12.scaled(&a1);
            lhs = lhs.sub(&e4cube.scaled(&-a2));
            lhs = lhs.sub(&e4.mul(&e8).scaled(&-a3));
            lhs = lhs.sub(&e12.scaled(&-a4));
            let rhs = e4cube.sub(&EllipticQExp::delta(8).scaled(&rat(720)));
            if !lhs.agrees_with(&rhs, 8) {
                return Err("Phi(theta_Leech) differs from E_4^3 - 720 Delta".into());
            }
            if !ring
                .theta_leech
                .siegel_phi()
                .agrees_with(&rhs, ring.trace_bound)
            {
                return Err("2-variable route disagrees".into());
            }
            Ok((None, "checked to q^8".into()))
        }),
    );

    run(
        "thetaconstant-psi8",
        "Theta(psi_8) = 0 mod 7",
        Box::new(|| {
            expect_status(
                theta_kernel_verify(&ring.psi8, 7),
                VerdictStatus::ProvedViaSturm,
                "Sturm bound 4",
            )
        }),
    );
    run(
        "thetaconstant-psi12",
        "Theta(psi_12) = 0 mod 11",
        Box::new(|| {
            expect_status(
                theta_kernel_verify(&ring.psi12, 11),
                VerdictStatus::ProvedViaSturm,
                "Sturm bound 6",
            )
        }),
    );

    run(
        "main1-qi-7",
        "Theta(F_8) = 0 mod 7 over Q(i) (class number one: F_8 is the Eisenstein series)",
        Box::new(|| {
            expect_status(
                theta_kernel_verify(&ring.e8, 7),
                VerdictStatus::ProvedViaSturm,
                "Sturm bound 4",
            )
        }),
    );

    run(
        "main1-sqrt3-11",
        "Theta(F_12) = 0 mod 11 over Q(sqrt(3)i)",
        Box::new(|| {
            let field = QuadField::eisenstein();
            if field.chi(11) != -1 {
                return Err("chi_K(11) should be -1".into());
            }
            let f = krieg::krieg_expansion(&KriegParams::new(field, 12), 4);
            expect_status(
                theta_kernel_verify(&f, 11),
                VerdictStatus::ProvedViaSturm,
                "Sturm bound 4 at effective weight 24",
            )
        }),
    );

    run(
        "main1-sqrt5-11",
        "Theta(F_12) = 0 mod 11 over Q(sqrt(5)i) (class number 2; no Sturm theorem there)",
        Box::new(|| {
            let field = QuadField::new(-20).expect("fundamental");
            if field.class_number() != 2 || field.chi(11) != -1 {
                return Err("hypotheses h_K = 2, chi_K(11) = -1".into());
            }
            let f = krieg::krieg_expansion(&KriegParams::new(field, 12), 4);
            expect_status(
                theta_kernel_verify(&f, 11),
                VerdictStatus::CheckedToBound,
                "checked to trace 4",
            )
        }),
    );

    run(
        "modpsingular-11",
        "F_6 over Q(sqrt(11)i) is mod-11 singular (rank-2 coefficients to trace 6)",
        Box::new(|| {
            let field = QuadField::new(-11).expect("fundamental");
            let f = krieg::krieg_expansion(&KriegParams::new(field, 6), 6);
            expect_status(
                mod_p_singular_verify(&f, 11),
                VerdictStatus::CheckedToBound,
                "rank-2 residues vanish to trace 6",
            )
        }),
    );

    run(
        "modpsingular-19",
        "F_10 over Q(sqrt(19)i) is mod-19 singular (rank-2 coefficients to trace 4)",
        Box::new(|| {
            let field = QuadField::new(-19).expect("fundamental");
            let f = krieg::krieg_expansion(&KriegParams::new(field, 10), 4);
            expect_status(
                mod_p_singular_verify(&f, 19),
                VerdictStatus::CheckedToBound,
                "rank-2 residues vanish to trace 4",
            )
        }),
    );

    run(
        "bigstar-prefactor",
        "half-weight prefactor (p+1)(p-1)/(B B_chi) vanishes mod p for p = 11, 19",
        Box::new(|| {
            for p in [11u64, 19] {
                let field = QuadField::new(-(p as i64)).expect("fundamental");
                let (a, _) = krieg::prefactors(&KriegParams::new(field, (p as i64 + 1) / 2));
                if a.is_zero() || p_valuation(&a, p) < 1 {
                    return Err(format!("prefactor not divisible by {p}"));
                }
            }
            Ok((None, "p-valuations >= 1".into()))
        }),
    );

    run(
        "ex1",
        "Theta(E_4) = 5 E_4 chi_8 + 2 F_12 mod 7",
        Box::new(|| {
            let e4chi8 = ring.gens.e4.mul(&ring.gens.chi8).expect("same field");
            let image = ring.gens.e4.theta_op();
            let diff = FourierExpansion::linear_combine_mixed(&[
                (rat(1), &image),
                (rat(-5), &e4chi8),
                (rat(-2), &ring.gens.f12),
            ])
            .expect("same field");
            let v = verify_zero_mod_p(&diff, 7, 12).map_err(|e| e.to_string())?;
            if v.status != VerdictStatus::ProvedViaSturm {
                return Err(format!(
                    "expected proved-via-sturm, got {} ({:?})",
                    v.status, v.witness
                ));
            }
            if v.bound_used != 2 {
                return Err(format!("Sturm bound should be 2, got {}", v.bound_used));
            }
            Ok((
                Some(v),
                format!("residues vanish to trace {}", ring.trace_bound),
            ))
        }),
    );

    run(
        "negctl-theta-e4",
        "negative control: Theta(E_4) is not 0 mod 7; witness [1,1+i,1]",
        Box::new(|| {
            let v = theta_kernel_verify(&ring.gens.e4, 7).map_err(|e| e.to_string())?;
            let want = HermIndex::from_ab(1, 1, 1, 1);
            match (&v.status, &v.witness) {
                (VerdictStatus::Refuted, Some((h, r))) if *h == want && *r == 5 => Ok((
                    Some(v.clone()),
                    "refuted with residue 5 at [1,1+i,1]".into(),
                )),
                _ => Err(format!(
                    "expected refutation at [1,1+i,1] residue 5, got {v:?}"
                )),
            }
        }),
    );

    run(
        "negctl-singular-e4",
        "negative control: E_4 is not mod-7 singular; witness [1,0,1]",
        Box::new(|| {
            let v = mod_p_singular_verify(&ring.gens.e4, 7).map_err(|e| e.to_string())?;
            let want = HermIndex::from_ab(1, 0, 0, 1);
            match (&v.status, &v.witness) {
                (VerdictStatus::Refuted, Some((h, r))) if *h == want && *r == 1 => {
                    Ok((Some(v.clone()), "refuted with residue 1 at [1,0,1]".into()))
                }
                _ => Err(format!(
                    "expected refutation at [1,0,1] residue 1, got {v:?}"
                )),
            }
        }),
    );

    report
}

struct ExternalGrams {
    h1: theta::GramMatrix,
    h2: theta::GramMatrix,
    h3: theta::GramMatrix,
}

fn load_external_grams(opts: &CheckOptions) -> Option<ExternalGrams> {
    if !opts.use_external_data {
        return None;
    }
    let dir = opts.external_dir.clone()?;
    let load = |name: &str| -> Option<theta::GramMatrix> {
        let text = std::fs::read_to_string(dir.join(name)).ok()?;
        theta::GramMatrix::parse(Some(QuadField::gaussian()), &text).ok()
    };
    Some(ExternalGrams {
        h1: load("h1.gram")?,
        h2: load("h2.gram")?,
        h3: load("h3.gram")?,
    })
}
