//! Theta series and theta constants.
//!
//! Lattice theta series: for an even positive definite Hermitian Gram matrix
//! G of rank r over O_K, the degree-2 series collects, for every pair of
//! lattice vectors (v, w), the index
//!
//!   H(v, w) = [ (1/2) v*Gv,  omega * (v*Gw),  (1/2) w*Gw ],
//!
//! where omega = sqrt(d_K)/2 is the integral generator (fields with
//! d_K = 0 mod 4; for other fields the indices would leave the lattice of
//! half-integral matrices, so they are rejected).  Vector enumeration is
//! exact Fincke-Pohst on the 2r-dimensional integer transfer of G with a
//! rational Cholesky decomposition; floating point only proposes candidate
//! ranges, membership is always decided exactly.
//!
//! Theta constants over Q(i): for a characteristic (a, b) in {0,1}^4 the
//! series sums exp-terms over g in Z[i]^2 shifted by ((1+i)/2) a, with a
//! sign character determined by b.  The terms live on a refinement of the
//! index lattice (quarter-integral diagonals), so a [`CharQExpansion`]
//! stores indices scaled by 4; the assembled objects psi_{4k} and F_10 land
//! back on integral indices, and the conversion asserts it.  The overall
//! exponent normalization is fixed by calibration: the unique scaling for
//! which psi_4 equals the weight-4 Eisenstein series (checked at build
//! time, and again by the acceptance suite).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num::bigint::BigInt;
use num::traits::{ToPrimitive, Zero};

use crate::lambda2::{isqrt, HermIndex};
use crate::number_theory::{QuadField, Rat};
use crate::qseries::{EllipticQExp, FourierExpansion};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaError {
    NotHermitian,
    OddDiagonal,
    NotPositiveDefinite,
    /// Theta series need sqrt(d_K)/2 integral, i.e. d_K = 0 mod 4.
    UnsupportedField(i64),
    OddCharacteristic([u8; 4]),
    /// A nonzero coefficient fell outside the integral index lattice.
    SupportViolation(HermIndex),
    /// Assembled coefficient not divisible by the stated normalization.
    NormalizationViolation(HermIndex),
    BadGramFile(String),
    /// Neither candidate exponent normalization reproduces psi_4 = E_4.
    CalibrationFailed,
}

impl fmt::Display for ThetaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaError::NotHermitian => write!(f, "matrix is not conjugate-symmetric"),
            ThetaError::OddDiagonal => write!(f, "diagonal must be even rational integers"),
            ThetaError::NotPositiveDefinite => write!(f, "matrix is not positive definite"),
            ThetaError::UnsupportedField(d) => {
                write!(f, "theta series need d_K = 0 mod 4, got {d}")
            }
            ThetaError::OddCharacteristic(m) => write!(f, "characteristic {m:?} is odd"),
            ThetaError::SupportViolation(h) => {
                write!(
                    f,
                    "nonzero coefficient outside the index lattice at raw {h}"
                )
            }
            ThetaError::NormalizationViolation(h) => {
                write!(f, "coefficient at {h} not divisible by the normalization")
            }
            ThetaError::BadGramFile(s) => write!(f, "bad Gram file: {s}"),
            ThetaError::CalibrationFailed => {
                write!(f, "no exponent normalization reproduces psi_4 = E_4")
            }
        }
    }
}

impl std::error::Error for ThetaError {}

/// O_K element as coordinates over {1, omega}.
pub type OkElt = (i64, i64);

fn ok_add(a: OkElt, b: OkElt) -> OkElt {
    (a.0 + b.0, a.1 + b.1)
}

fn ok_mul(field: &QuadField, a: OkElt, b: OkElt) -> OkElt {
    let d = field.disc();
    if d % 4 == 0 {
        // omega^2 = d/4
        (a.0 * b.0 + a.1 * b.1 * (d / 4), a.0 * b.1 + a.1 * b.0)
    } else {
        // omega^2 = omega + (d-1)/4
        let c = (d - 1) / 4;
        (a.0 * b.0 + a.1 * b.1 * c, a.0 * b.1 + a.1 * b.0 + a.1 * b.1)
    }
}

fn ok_conj(field: &QuadField, a: OkElt) -> OkElt {
    if field.disc() % 4 == 0 {
        (a.0, -a.1)
    } else {
        (a.0 + a.1, -a.1)
    }
}

/// An even positive definite Hermitian Gram matrix over O_K.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GramMatrix {
    pub field: QuadField,
    pub rank: usize,
    pub entries: Vec<Vec<OkElt>>,
    pub label: String,
    unimodular: bool,
}

impl GramMatrix {
    pub fn new(
        field: QuadField,
        entries: Vec<Vec<OkElt>>,
        label: impl Into<String>,
    ) -> Result<Self, ThetaError> {
        let rank = entries.len();
        if rank == 0 || entries.iter().any(|row| row.len() != rank) {
            return Err(ThetaError::NotHermitian);
        }
        for j in 0..rank {
            for l in 0..rank {
                if entries[l][j] != ok_conj(&field, entries[j][l]) {
                    return Err(ThetaError::NotHermitian);
                }
            }
            if entries[j][j].1 != 0 || entries[j][j].0 % 2 != 0 {
                return Err(ThetaError::OddDiagonal);
            }
        }
        let mut g = GramMatrix {
            field,
            rank,
            entries,
            label: label.into(),
            unimodular: false,
        };
        // positive definiteness and the determinant both come out of the
        // rational Cholesky of the integer transfer
        let chol = cholesky(&transfer_matrix(&g)).ok_or(ThetaError::NotPositiveDefinite)?;
        let det: Rat = chol.diag.iter().product();
        let cov = Rat::from_integer(BigInt::from(field.disc_abs() / 4).pow(rank as u32));
        g.unimodular = det == cov;
        Ok(g)
    }

    pub fn is_unimodular(&self) -> bool {
        self.unimodular
    }

    /// v*Gw in O_K, for coordinate vectors of length rank.
    fn inner(&self, v: &[OkElt], w: &[OkElt]) -> OkElt {
        let mut acc = (0, 0);
        for j in 0..self.rank {
            for l in 0..self.rank {
                let t = ok_mul(
                    &self.field,
                    ok_mul(&self.field, ok_conj(&self.field, v[j]), self.entries[j][l]),
                    w[l],
                );
                acc = ok_add(acc, t);
            }
        }
        acc
    }

    /// v*Gv, a rational integer.
    fn norm_of(&self, v: &[OkElt]) -> i64 {
        let z = self.inner(v, v);
        debug_assert_eq!(z.1, 0, "v*Gv must be real");
        z.0
    }

    /// Parse the plain-text Gram format.
    pub fn parse(field_hint: Option<QuadField>, text: &str) -> Result<Self, ThetaError> {
        let err = |s: &str| ThetaError::BadGramFile(s.to_string());
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("hermgram 1") {
            return Err(err("bad magic, expected 'hermgram 1'"));
        }
        let mut disc = None;
        let mut rank = None;
        let mut unimodular_claim = None;
        let mut label = String::new();
        let mut rows: Vec<Vec<OkElt>> = Vec::new();
        let mut body = String::new();
        let mut checksum: Option<String> = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("checksum ") {
                checksum = Some(rest.trim().to_string());
                continue;
            }
            if let Some(rest) = line.strip_prefix("disc ") {
                disc = Some(rest.parse::<i64>().map_err(|_| err("disc"))?);
            } else if let Some(rest) = line.strip_prefix("rank ") {
                rank = Some(rest.parse::<usize>().map_err(|_| err("rank"))?);
            } else if let Some(rest) = line.strip_prefix("unimodular ") {
                unimodular_claim = Some(rest.parse::<bool>().map_err(|_| err("unimodular"))?);
            } else if let Some(rest) = line.strip_prefix("label ") {
                label = rest.to_string();
            } else {
                let mut row = Vec::new();
                for tok in line.split_whitespace() {
                    let (x, y) = tok.split_once(',').ok_or_else(|| err("entry needs x,y"))?;
                    row.push((
                        x.parse::<i64>().map_err(|_| err("entry x"))?,
                        y.parse::<i64>().map_err(|_| err("entry y"))?,
                    ));
                }
                rows.push(row);
            }
            body.push_str(line);
            body.push('\n');
        }
        if let Some(cs) = checksum {
            let actual = format!("{:08x}", fnv1a(body.as_bytes()));
            if cs != actual {
                return Err(err(&format!(
                    "checksum mismatch (file {cs}, content {actual})"
                )));
            }
        }
        let disc = disc.ok_or_else(|| err("missing disc"))?;
        let field = match field_hint {
            Some(f) if f.disc() == disc => f,
            Some(_) => return Err(err("discriminant does not match requested field")),
            None => QuadField::new(disc).map_err(|e| err(&e.to_string()))?,
        };
        if Some(rows.len()) != rank {
            return Err(err("rank does not match row count"));
        }
        let g = GramMatrix::new(field, rows, label)?;
        if let Some(claim) = unimodular_claim {
            if claim != g.unimodular {
                return Err(err("unimodular flag does not match determinant"));
            }
        }
        Ok(g)
    }

    pub fn render(&self) -> String {
        let mut body = String::new();
        body.push_str(&format!("disc {}\n", self.field.disc()));
        body.push_str(&format!("rank {}\n", self.rank));
        body.push_str(&format!("unimodular {}\n", self.unimodular));
        body.push_str(&format!("label {}\n", self.label));
        for row in &self.entries {
            let toks: Vec<String> = row.iter().map(|(x, y)| format!("{x},{y}")).collect();
            body.push_str(&toks.join(" "));
            body.push('\n');
        }
        format!(
            "hermgram 1\n{body}checksum {:08x}\n",
            fnv1a(body.as_bytes())
        )
    }
}

fn fnv1a(bytes: &[u8]) -> u32 {
    let mut h: u32 = 0x811c9dc5;
    for &b in bytes {
        h ^= b as u32;
        h = h.wrapping_mul(0x01000193);
    }
    h
}

/// 2r x 2r rational Gram of the integer transfer of v*Gv.
fn transfer_matrix(g: &GramMatrix) -> Vec<Vec<Rat>> {
    let n = 2 * g.rank;
    let q_of = |coords: &[i64]| -> i64 {
        let mut v = vec![(0, 0); g.rank];
        for (s, &c) in coords.iter().enumerate() {
            if s % 2 == 0 {
                v[s / 2].0 += c;
            } else {
                v[s / 2].1 += c;
            }
        }
        g.norm_of(&v)
    };
    let mut a = vec![vec![Rat::zero(); n]; n];
    let mut coords = vec![0i64; n];
    let mut singles = vec![0i64; n];
    for s in 0..n {
        coords.fill(0);
        coords[s] = 1;
        singles[s] = q_of(&coords);
        a[s][s] = Rat::from_integer(BigInt::from(singles[s]));
    }
    for s in 0..n {
        for t in (s + 1)..n {
            coords.fill(0);
            coords[s] = 1;
            coords[t] = 1;
            let q = q_of(&coords) - singles[s] - singles[t];
            let half = Rat::new(BigInt::from(q), BigInt::from(2));
            a[s][t] = half.clone();
            a[t][s] = half;
        }
    }
    a
}

struct Cholesky {
    /// diagonal weights q_ii
    diag: Vec<Rat>,
    /// unit upper-triangular multipliers u[i][j], j > i
    upper: Vec<Vec<Rat>>,
}

/// Rational quadratic-completion decomposition: Q(z) = sum_i q_ii (z_i +
/// sum_{j>i} u_ij z_j)^2.  None when the form is not positive definite.
fn cholesky(a: &[Vec<Rat>]) -> Option<Cholesky> {
    let n = a.len();
    let mut q: Vec<Vec<Rat>> = a.to_vec();
    let mut upper = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        if q[i][i] <= Rat::zero() {
            return None;
        }
        for j in (i + 1)..n {
            upper[i][j] = &q[i][j] / &q[i][i];
        }
        for k in (i + 1)..n {
            for l in k..n {
                let delta = upper[i][k].clone() * &q[i][l];
                q[k][l] -= delta;
                if l != k {
                    let v = q[k][l].clone();
                    q[l][k] = v;
                }
            }
        }
    }
    let diag: Vec<Rat> = (0..n).map(|i| q[i][i].clone()).collect();
    Some(Cholesky { diag, upper })
}

fn rat_to_f64(x: &Rat) -> f64 {
    x.numer().to_f64().unwrap_or(f64::MAX) / x.denom().to_f64().unwrap_or(1.0)
}

/// All integer vectors z with Q(z) <= c.  Floats only propose candidate
/// ranges; acceptance is exact.
fn enumerate_transfer(chol: &Cholesky, c: i64) -> Vec<Vec<i64>> {
    let n = chol.diag.len();
    let mut out = Vec::new();
    let mut z = vec![0i64; n];
    let cap = Rat::from_integer(BigInt::from(c));
    descend(chol, n - 1, &cap, &mut z, &mut out);
    out
}

fn descend(chol: &Cholesky, level: usize, budget: &Rat, z: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    let n = chol.diag.len();
    // offset u = sum_{j > level} u_ij z_j
    let mut u = Rat::zero();
    for j in (level + 1)..n {
        if z[j] != 0 {
            u += chol.upper[level][j].clone() * Rat::from_integer(BigInt::from(z[j]));
        }
    }
    let qll = &chol.diag[level];
    let radius = (rat_to_f64(budget) / rat_to_f64(qll)).max(0.0).sqrt();
    let center = -rat_to_f64(&u);
    let lo = (center - radius).floor() as i64 - 1;
    let hi = (center + radius).ceil() as i64 + 1;
    for zi in lo..=hi {
        let shifted = Rat::from_integer(BigInt::from(zi)) + &u;
        let weight = qll.clone() * &shifted * &shifted;
        if weight > *budget {
            continue;
        }
        z[level] = zi;
        if level == 0 {
            out.push(z.clone());
        } else {
            let rest = budget - &weight;
            descend(chol, level - 1, &rest, z, out);
        }
    }
    z[level] = 0;
}

/// Complete lists of lattice vectors by half-norm (1/2) v*Gv = t for
/// t = 0..=bound, each bucket sorted.  Includes the zero vector at t = 0.
pub fn short_vectors(
    g: &GramMatrix,
    bound: i64,
) -> Result<BTreeMap<i64, Vec<Vec<OkElt>>>, ThetaError> {
    let chol = cholesky(&transfer_matrix(g)).ok_or(ThetaError::NotPositiveDefinite)?;
    let mut buckets: BTreeMap<i64, Vec<Vec<OkElt>>> = BTreeMap::new();
    for t in 0..=bound {
        buckets.insert(t, Vec::new());
    }
    if bound < 0 {
        return Ok(buckets);
    }
    for z in enumerate_transfer(&chol, 2 * bound) {
        let v: Vec<OkElt> = z.chunks(2).map(|ch| (ch[0], ch[1])).collect();
        let q = g.norm_of(&v);
        debug_assert!(q % 2 == 0, "even lattice");
        let t = q / 2;
        if t <= bound {
            buckets.get_mut(&t).expect("bucket").push(v);
        }
    }
    for vs in buckets.values_mut() {
        vs.sort();
    }
    Ok(buckets)
}

/// Degree-2 theta series of an even positive definite Gram matrix, up to
/// the trace bound.  Weight metadata is the rank.
pub fn theta_series(g: &GramMatrix, trace_bound: i64) -> Result<FourierExpansion, ThetaError> {
    let d = g.field.disc();
    if d % 4 != 0 {
        return Err(ThetaError::UnsupportedField(d));
    }
    let buckets = short_vectors(g, trace_bound)?;
    let mut counts: BTreeMap<HermIndex, i64> = BTreeMap::new();
    for (m, vs) in &buckets {
        for (n, ws) in &buckets {
            if m + n > trace_bound {
                continue;
            }
            for v in vs {
                for wv in ws {
                    let z = g.inner(v, wv);
                    // c = omega * z
                    let c = ok_mul(&g.field, (0, 1), z);
                    let h = HermIndex {
                        m: *m,
                        x: c.0,
                        y: c.1,
                        n: *n,
                    };
                    debug_assert!(g.field.is_psd(&h));
                    *counts.entry(h).or_insert(0) += 1;
                }
            }
        }
    }
    Ok(counts_to_expansion(g, trace_bound, counts))
}

fn counts_to_expansion(
    g: &GramMatrix,
    trace_bound: i64,
    counts: BTreeMap<HermIndex, i64>,
) -> FourierExpansion {
    let w = g.field.unit_count() as i64;
    let rank = g.rank as i64;
    let mut out =
        FourierExpansion::zero(g.field, rank, Some((rank / 2).rem_euclid(w)), trace_bound);
    for (h, c) in counts {
        out.set(h, Rat::from_integer(BigInt::from(c)));
    }
    out
}

/// Brute-force theta series over a coordinate box; the independent oracle
/// for small Gram matrices.  The box must contain every vector of half-norm
/// <= trace_bound.
pub fn theta_series_brute(
    g: &GramMatrix,
    trace_bound: i64,
    box_radius: i64,
) -> Result<FourierExpansion, ThetaError> {
    let d = g.field.disc();
    if d % 4 != 0 {
        return Err(ThetaError::UnsupportedField(d));
    }
    let mut vectors: Vec<Vec<OkElt>> = Vec::new();
    let mut cur = vec![(0i64, 0i64); g.rank];
    collect_box(g, 0, box_radius, &mut cur, &mut vectors);
    let half_norms: Vec<i64> = vectors.iter().map(|v| g.norm_of(v) / 2).collect();
    let mut counts: BTreeMap<HermIndex, i64> = BTreeMap::new();
    for (v, hv) in vectors.iter().zip(&half_norms) {
        if *hv > trace_bound {
            continue;
        }
        for (wv, hw) in vectors.iter().zip(&half_norms) {
            if hv + hw > trace_bound {
                continue;
            }
            let z = g.inner(v, wv);
            let c = ok_mul(&g.field, (0, 1), z);
            *counts
                .entry(HermIndex {
                    m: *hv,
                    x: c.0,
                    y: c.1,
                    n: *hw,
                })
                .or_insert(0) += 1;
        }
    }
    Ok(counts_to_expansion(g, trace_bound, counts))
}

fn collect_box(
    g: &GramMatrix,
    pos: usize,
    radius: i64,
    cur: &mut Vec<OkElt>,
    out: &mut Vec<Vec<OkElt>>,
) {
    if pos == g.rank {
        out.push(cur.clone());
        return;
    }
    for x in -radius..=radius {
        for y in -radius..=radius {
            cur[pos] = (x, y);
            collect_box(g, pos + 1, radius, cur, out);
        }
    }
    cur[pos] = (0, 0);
}

/// A theta characteristic: stacked (a, b) with entries in {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThetaCharacteristic {
    pub a: [u8; 2],
    pub b: [u8; 2],
}

impl ThetaCharacteristic {
    pub fn new(m: [u8; 4]) -> Result<Self, ThetaError> {
        let c = ThetaCharacteristic {
            a: [m[0], m[1]],
            b: [m[2], m[3]],
        };
        if m.iter().any(|&v| v > 1) || !c.is_even() {
            return Err(ThetaError::OddCharacteristic(m));
        }
        Ok(c)
    }

    /// Even means a.b = 0 mod 2.
    pub fn is_even(&self) -> bool {
        (self.a[0] * self.b[0] + self.a[1] * self.b[1]) % 2 == 0
    }

    /// The ten even characteristics of degree 2, in the standard listing.
    pub fn even_set() -> Vec<ThetaCharacteristic> {
        [
            [0, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 0, 1, 0],
            [0, 0, 1, 1],
            [0, 1, 0, 0],
            [0, 1, 1, 0],
            [1, 0, 0, 0],
            [1, 0, 0, 1],
            [1, 1, 0, 0],
            [1, 1, 1, 1],
        ]
        .into_iter()
        .map(|m| ThetaCharacteristic::new(m).expect("listed characteristics are even"))
        .collect()
    }
}

/// Exponent normalization of the theta-constant lattice sum, selected by
/// calibration against psi_4 = E_4.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kappa {
    /// exp(2 pi i * (1/2) Z{v}): true indices are raw/4.
    TwoPiI,
    /// exp(pi i * (1/2) Z{v}): true indices are raw/8.
    PiI,
}

impl Kappa {
    pub fn divisor(&self) -> i64 {
        match self {
            Kappa::TwoPiI => 4,
            Kappa::PiI => 8,
        }
    }

    pub fn parse(s: &str) -> Option<Kappa> {
        match s {
            "2*pi*i" => Some(Kappa::TwoPiI),
            "pi*i" => Some(Kappa::PiI),
            _ => None,
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::TwoPiI => write!(f, "2*pi*i"),
            Kappa::PiI => write!(f, "pi*i"),
        }
    }
}

/// q-expansion of a theta constant (or of products of them) on the refined
/// index lattice: stored indices are 4x the true ones under the calibrated
/// normalization (8x under the rejected one).  Coefficients are signed
/// vector counts, far below i128 range.
#[derive(Debug, Clone)]
pub struct CharQExpansion {
    pub raw_bound: i64,
    buckets: Vec<Vec<(HermIndex, i128)>>,
}

impl CharQExpansion {
    fn from_map(raw_bound: i64, map: BTreeMap<HermIndex, i128>) -> Self {
        let mut buckets = vec![Vec::new(); (raw_bound + 1) as usize];
        for (h, v) in map {
            if v != 0 {
                buckets[h.trace() as usize].push((h, v));
            }
        }
        CharQExpansion { raw_bound, buckets }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HermIndex, &i128)> {
        self.buckets.iter().flatten().map(|(h, v)| (h, v))
    }

    pub fn support_len(&self) -> usize {
        self.buckets.iter().map(Vec::len).sum()
    }

    pub fn coeff(&self, h: &HermIndex) -> i128 {
        let t = h.trace();
        if t < 0 || t > self.raw_bound {
            return 0;
        }
        self.buckets[t as usize]
            .iter()
            .find(|(k, _)| k == h)
            .map(|(_, v)| *v)
            .unwrap_or(0)
    }

    fn mul(&self, other: &CharQExpansion, ws: &mut FlatBuf) -> CharQExpansion {
        let bound = self.raw_bound.min(other.raw_bound);
        debug_assert!(ws.s >= bound);
        for t1 in 0..=bound {
            if self.buckets[t1 as usize].is_empty() {
                continue;
            }
            for t2 in 0..=(bound - t1) {
                for (h1, v1) in &self.buckets[t1 as usize] {
                    for (h2, v2) in &other.buckets[t2 as usize] {
                        ws.add(&h1.add(h2), v1 * v2);
                    }
                }
            }
        }
        CharQExpansion::from_map(bound, ws.drain())
    }
}

/// Flat accumulation grid over raw indices with m + n <= s, |x|, |y| <= s.
struct FlatBuf {
    s: i64,
    dim_mn: usize,
    dim_xy: usize,
    data: Vec<i128>,
    stamp: Vec<u32>,
    epoch: u32,
    touched: Vec<u32>,
}

impl FlatBuf {
    fn new(s: i64) -> Self {
        let dim_mn = (s + 1) as usize;
        let dim_xy = (2 * s + 1) as usize;
        let len = dim_mn * dim_mn * dim_xy * dim_xy;
        FlatBuf {
            s,
            dim_mn,
            dim_xy,
            data: vec![0; len],
            stamp: vec![u32::MAX; len],
            epoch: 0,
            touched: Vec::new(),
        }
    }

    #[inline]
    fn index(&self, h: &HermIndex) -> usize {
        debug_assert!(h.m >= 0 && h.n >= 0 && h.m + h.n <= self.s);
        debug_assert!(h.x.abs() <= self.s && h.y.abs() <= self.s);
        ((h.m as usize * self.dim_mn + h.n as usize) * self.dim_xy + (h.x + self.s) as usize)
            * self.dim_xy
            + (h.y + self.s) as usize
    }

    #[inline]
    fn add(&mut self, h: &HermIndex, v: i128) {
        let i = self.index(h);
        if self.stamp[i] != self.epoch {
            self.stamp[i] = self.epoch;
            self.data[i] = 0;
            self.touched.push(i as u32);
        }
        self.data[i] += v;
    }

    fn decode(&self, i: usize) -> HermIndex {
        let y = (i % self.dim_xy) as i64 - self.s;
        let rest = i / self.dim_xy;
        let x = (rest % self.dim_xy) as i64 - self.s;
        let rest = rest / self.dim_xy;
        let n = (rest % self.dim_mn) as i64;
        let m = (rest / self.dim_mn) as i64;
        HermIndex { m, x, y, n }
    }

    fn drain(&mut self) -> BTreeMap<HermIndex, i128> {
        let mut out = BTreeMap::new();
        for &i in &self.touched {
            let v = self.data[i as usize];
            if v != 0 {
                out.insert(self.decode(i as usize), v);
            }
        }
        self.touched.clear();
        self.epoch = self.epoch.wrapping_add(1);
        out
    }
}

/// The lattice sum of the theta constant with the given characteristic,
/// collected on the refined index lattice up to raw trace `raw_bound`.
/// Terms are signed unit counts coming from the b-part character.
pub fn theta_constant(m: &ThetaCharacteristic, raw_bound: i64) -> CharQExpansion {
    // Doubled coordinates: V_j = 2 g_j + a_j (1+i) runs over (2Z + a_j)^2
    // and |v_j|^2 = |V_j|^2 / 4, so a term's raw index has diagonal
    // |V_j|^2 / 2 and off-diagonal coordinate i * V_1 * conj(V_2).
    let mut map = BTreeMap::new();
    let cap = 2 * raw_bound; // |V1|^2 + |V2|^2 <= 2 * raw_bound
    let comps = |a: u8| -> Vec<(i64, i64, i64)> {
        let mut out = Vec::new();
        let lim = isqrt(cap) + 2;
        let start = a as i64;
        let mut vx = start - 2 * ((lim + 2) / 2);
        while vx <= lim {
            let mut vy = start - 2 * ((lim + 2) / 2);
            while vy <= lim {
                let n2 = vx * vx + vy * vy;
                if n2 <= cap {
                    out.push((vx, vy, n2));
                }
                vy += 2;
            }
            vx += 2;
        }
        out
    };
    let c1 = comps(m.a[0]);
    let c2 = comps(m.a[1]);
    for &(v1x, v1y, n1) in &c1 {
        let m_raw = n1 / 2; // |V|^2 is even for both parities
        if m_raw > raw_bound {
            continue;
        }
        for &(v2x, v2y, n2) in &c2 {
            let n_raw = n2 / 2;
            if m_raw + n_raw > raw_bound {
                continue;
            }
            // c_raw = i * V1 * conj(V2)
            let p = v1x * v2x + v1y * v2y;
            let q = v1y * v2x - v1x * v2y;
            let h = HermIndex {
                m: m_raw,
                x: -q,
                y: p,
                n: n_raw,
            };
            // sign character from b on the integer parts of g = (V - a(1+i))/2
            let g1 = (v1x - m.a[0] as i64) / 2 + (v1y - m.a[0] as i64) / 2;
            let g2 = (v2x - m.a[1] as i64) / 2 + (v2y - m.a[1] as i64) / 2;
            let exponent = m.b[0] as i64 * g1 + m.b[1] as i64 * g2;
            let sign: i128 = if exponent.rem_euclid(2) == 0 { 1 } else { -1 };
            *map.entry(h).or_insert(0) += sign;
        }
    }
    map.retain(|_, v| *v != 0);
    CharQExpansion::from_map(raw_bound, map)
}

/// Convert an assembled refined-lattice expansion back to the integral
/// index lattice: every index must be divisible by `divisor` and every
/// coefficient by `denominator`.
fn into_lambda2(
    c: &CharQExpansion,
    divisor: i64,
    denominator: i128,
    weight: i64,
    char_tag: Option<i64>,
) -> Result<FourierExpansion, ThetaError> {
    let field = QuadField::gaussian();
    let mut out = FourierExpansion::zero(field, weight, char_tag, c.raw_bound / divisor);
    for (h, v) in c.terms() {
        if h.m % divisor != 0 || h.x % divisor != 0 || h.y % divisor != 0 || h.n % divisor != 0 {
            return Err(ThetaError::SupportViolation(*h));
        }
        if v % denominator != 0 {
            return Err(ThetaError::NormalizationViolation(*h));
        }
        let key = HermIndex {
            m: h.m / divisor,
            x: h.x / divisor,
            y: h.y / divisor,
            n: h.n / divisor,
        };
        out.set(key, Rat::from_integer(BigInt::from(v / denominator)));
    }
    Ok(out)
}

/// psi_4, psi_8, psi_12 assembled in one pass over the ten even
/// characteristics, for a given exponent normalization.
fn psi_family_with(kappa: Kappa, trace_bound: i64) -> Result<[FourierExpansion; 3], ThetaError> {
    let divisor = kappa.divisor();
    let s = divisor * trace_bound;
    let mut ws = FlatBuf::new(s);
    let mut acc: [BTreeMap<HermIndex, i128>; 3] = Default::default();
    for m in ThetaCharacteristic::even_set() {
        let theta = theta_constant(&m, s);
        let p2 = theta.mul(&theta, &mut ws);
        let p4 = p2.mul(&p2, &mut ws);
        let p8 = p4.mul(&p4, &mut ws);
        let p12 = p8.mul(&p4, &mut ws);
        for (dst, src) in acc.iter_mut().zip([&p4, &p8, &p12]) {
            for (h, v) in src.terms() {
                *dst.entry(*h).or_insert(0) += v;
            }
        }
    }
    let weights = [4i64, 8, 12];
    let mut out = Vec::with_capacity(3);
    for (map, k) in acc.into_iter().zip(weights) {
        let mut map = map;
        map.retain(|_, v| *v != 0);
        let c = CharQExpansion::from_map(s, map);
        out.push(into_lambda2(
            &c,
            divisor,
            4,
            k,
            Some((k / 2).rem_euclid(4)),
        )?);
    }
    Ok(out.try_into().expect("three entries"))
}

static KAPPA: OnceLock<Kappa> = OnceLock::new();

/// The calibrated exponent normalization: the unique choice for which
/// psi_4 agrees with the weight-4 Eisenstein expansion (probed at a small
/// trace bound; callers re-assert the full-depth equality).
pub fn calibrate_kappa() -> Result<Kappa, ThetaError> {
    if let Some(k) = KAPPA.get() {
        return Ok(*k);
    }
    let e4 =
        crate::krieg::krieg_expansion(&crate::krieg::KriegParams::new(QuadField::gaussian(), 4), 2);
    for kappa in [Kappa::TwoPiI, Kappa::PiI] {
        if let Ok([psi4, _, _]) = psi_family_with(kappa, 2) {
            if psi4.agrees_with(&e4, 2) {
                return Ok(*KAPPA.get_or_init(|| kappa));
            }
        }
    }
    Err(ThetaError::CalibrationFailed)
}

/// psi_4k = (1/4) sum over the ten even characteristics of theta_m^4k,
/// for weight 4k in {4, 8, 12}.
pub fn psi_series(weight: i64, trace_bound: i64) -> Result<FourierExpansion, ThetaError> {
    let (fam, _) = psi_all(trace_bound)?;
    match weight {
        4 => Ok(fam[0].clone()),
        8 => Ok(fam[1].clone()),
        12 => Ok(fam[2].clone()),
        _ => panic!("psi_series is defined for weights 4, 8, 12"),
    }
}

/// All three psi series at once (cheaper than three separate calls) plus
/// the calibration constant.
pub fn psi_all(trace_bound: i64) -> Result<([FourierExpansion; 3], Kappa), ThetaError> {
    let kappa = calibrate_kappa()?;
    Ok((psi_family_with(kappa, trace_bound)?, kappa))
}

/// F_10 = 2^-12 * product of the ten even theta constants.
pub fn f10_series(trace_bound: i64) -> Result<FourierExpansion, ThetaError> {
    let kappa = calibrate_kappa()?;
    let divisor = kappa.divisor();
    let s = divisor * trace_bound;
    let mut ws = FlatBuf::new(s);
    let mut prod: Option<CharQExpansion> = None;
    for m in ThetaCharacteristic::even_set() {
        let theta = theta_constant(&m, s);
        prod = Some(match prod {
            None => theta,
            Some(p) => p.mul(&theta, &mut ws),
        });
    }
    into_lambda2(&prod.expect("ten factors"), divisor, 1 << 12, 10, Some(1))
}

/// Rank-1 column of psi_4k through the one-variable route: the Siegel
/// operator is a ring homomorphism on expansions, so Phi(psi_4k) =
/// (1/4) sum over characteristics with a_2 = 0 of Phi(theta_m)^4k, and
/// Phi(theta_m) is a classical one-variable theta series.  Independent of
/// the two-variable convolution pipeline.
pub fn psi_phi_qexp(weight: i64, bound: i64) -> Result<EllipticQExp, ThetaError> {
    assert!(matches!(weight, 4 | 8 | 12));
    let kappa = calibrate_kappa()?;
    let divisor = kappa.divisor();
    let s = (divisor * bound) as usize;
    let series_mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); s + 1];
        for i in 0..=s {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..=(s - i) {
                if !b[j].is_zero() {
                    let prod = &a[i] * &b[j];
                    out[i + j] += prod;
                }
            }
        }
        out
    };
    let mut acc = vec![BigInt::zero(); s + 1];
    for m in ThetaCharacteristic::even_set() {
        if m.a[1] != 0 {
            continue; // shifted second coordinate never reaches v2 = 0
        }
        // phi[t] = sum over V in (2Z + a1)^2 with |V|^2 / 2 = t of the sign
        let mut phi = vec![BigInt::zero(); s + 1];
        let cap = 2 * s as i64;
        let lim = isqrt(cap) + 2;
        let start = m.a[0] as i64;
        let mut vx = start - 2 * ((lim + 2) / 2);
        while vx <= lim {
            let mut vy = start - 2 * ((lim + 2) / 2);
            while vy <= lim {
                let n2 = vx * vx + vy * vy;
                if n2 <= cap {
                    let g = (vx - start) / 2 + (vy - start) / 2;
                    let sign = if (m.b[0] as i64 * g).rem_euclid(2) == 0 {
                        1
                    } else {
                        -1
                    };
                    phi[(n2 / 2) as usize] += BigInt::from(sign);
                }
                vy += 2;
            }
            vx += 2;
        }
        let p2 = series_mul(&phi, &phi);
        let p4 = series_mul(&p2, &p2);
        let pw = match weight {
            4 => p4,
            8 => series_mul(&p4, &p4),
            12 => {
                let p8 = series_mul(&p4, &p4);
                series_mul(&p8, &p4)
            }
            _ => unreachable!(),
        };
        for (dst, v) in acc.iter_mut().zip(pw) {
            *dst += v;
        }
    }
    let mut out = EllipticQExp::zero(weight, bound);
    for (t_raw, v) in acc.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        if t_raw as i64 % divisor != 0 {
            return Err(ThetaError::SupportViolation(HermIndex::new(
                t_raw as i64,
                0,
                0,
                0,
            )));
        }
        let (q, r) = num::Integer::div_rem(v, &BigInt::from(4));
        if !r.is_zero() {
            return Err(ThetaError::NormalizationViolation(HermIndex::new(
                t_raw as i64,
                0,
                0,
                0,
            )));
        }
        out.set(t_raw as i64 / divisor, Rat::from_integer(q));
    }
    Ok(out)
}
