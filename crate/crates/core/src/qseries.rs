//! Truncated generalized q-expansions and the operators on them.
//!
//! A [`FourierExpansion`] is a finite map from psd lattice indices of trace
//! at most `trace_bound` to exact rationals, tagged with the field, the
//! weight, the abelian character exponent (`char_tag`, the l of det^l, kept
//! mod w_K) and a symmetry flag.  Absent indices are zero.  Truncation is by
//! trace only, which is stable under products: every decomposition of an
//! index of trace t uses parts of trace at most t.
//!
//! The theta operator multiplies the coefficient at H by det(H) (the exact
//! rational ndet/D_K).  Its output is generally not modular, so the result
//! keeps the source weight and is tagged `theta_image_of`; congruence checks
//! assign the effective weight k + p + 1 once a prime is chosen.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};

use crate::lambda2::{HermIndex, SiegelIndex};
use crate::number_theory::{self, QuadField, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    FieldMismatch,
    WeightMismatch { left: i64, right: i64 },
    WrongField { wanted: i64, got: i64 },
    NotPIntegral { prime: u64, at: HermIndex },
    ParseError(String),
}

impl fmt::Display for QSeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QSeriesError::FieldMismatch => write!(f, "expansions over different fields"),
            QSeriesError::WeightMismatch { left, right } => {
                write!(
                    f,
                    "weight mismatch ({left} vs {right}); pass allow_mixed to combine"
                )
            }
            QSeriesError::WrongField { wanted, got } => {
                write!(
                    f,
                    "operation needs discriminant {wanted}, expansion has {got}"
                )
            }
            QSeriesError::NotPIntegral { prime, at } => {
                write!(f, "coefficient at {at} is not {prime}-integral")
            }
            QSeriesError::ParseError(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl std::error::Error for QSeriesError {}

/// Truncated Fourier expansion of a (candidate) Hermitian modular form.
#[derive(Debug, Clone)]
pub struct FourierExpansion {
    pub field: QuadField,
    pub weight: i64,
    /// Exponent l of the abelian character det^l, mod w_K; None = unknown.
    pub char_tag: Option<i64>,
    pub trace_bound: i64,
    pub symmetric: bool,
    /// Source weight k when this is the image of a weight-k form under the
    /// theta operator.
    pub theta_image_of: Option<i64>,
    /// Set by the Eisenstein builder: whether (k, K) satisfies the
    /// hypotheses of the explicit coefficient theorem (k > 4, w_K | k).
    pub in_theorem_range: Option<bool>,
    coeffs: BTreeMap<HermIndex, Rat>,
}

impl FourierExpansion {
    pub fn zero(field: QuadField, weight: i64, char_tag: Option<i64>, trace_bound: i64) -> Self {
        FourierExpansion {
            field,
            weight,
            char_tag,
            trace_bound,
            symmetric: true,
            theta_image_of: None,
            in_theorem_range: None,
            coeffs: BTreeMap::new(),
        }
    }

    /// The constant expansion 1 (weight 0, trivial character).
    pub fn one(field: QuadField, trace_bound: i64) -> Self {
        let mut e = FourierExpansion::zero(field, 0, Some(0), trace_bound);
        e.set(HermIndex::ZERO, Rat::one());
        e
    }

    pub fn set(&mut self, h: HermIndex, value: Rat) {
        debug_assert!(self.field.is_psd(&h) && h.trace() <= self.trace_bound);
        if value.is_zero() {
            self.coeffs.remove(&h);
        } else {
            self.coeffs.insert(h, value);
        }
    }

    pub fn coeff(&self, h: &HermIndex) -> Rat {
        self.coeffs.get(h).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HermIndex, &Rat)> {
        self.coeffs.iter()
    }

    /// Support indices sorted by the field's lexicographic order.
    pub fn support_lex(&self) -> Vec<HermIndex> {
        let mut v: Vec<HermIndex> = self.coeffs.keys().copied().collect();
        v.sort_by(|a, b| self.field.lex_cmp(a, b));
        v
    }

    /// Drop coefficients above a smaller trace bound.
    pub fn truncated(&self, t: i64) -> FourierExpansion {
        let mut out = self.clone();
        out.trace_bound = t.min(self.trace_bound);
        out.coeffs.retain(|h, _| h.trace() <= t);
        out
    }

    pub fn scaled(&self, c: &Rat) -> FourierExpansion {
        let mut out = self.clone();
        if c.is_zero() {
            out.coeffs.clear();
            return out;
        }
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    /// True when both expansions agree coefficientwise up to the smaller of
    /// the two bounds and the given cap.
    pub fn agrees_with(&self, other: &FourierExpansion, t: i64) -> bool {
        let t = t.min(self.trace_bound).min(other.trace_bound);
        for (h, v) in &self.coeffs {
            if h.trace() <= t && *v != other.coeff(h) {
                return false;
            }
        }
        for (h, v) in &other.coeffs {
            if h.trace() <= t && *v != self.coeff(h) {
                return false;
            }
        }
        true
    }

    /// Exact linear combination; all terms must share field and weight.
    pub fn linear_combine(terms: &[(Rat, &FourierExpansion)]) -> Result<Self, QSeriesError> {
        Self::combine_impl(terms, false)
    }

    /// Linear combination across weights (mod-p filtration work); the result
    /// keeps the first term's weight and the common char tag, if any.
    pub fn linear_combine_mixed(terms: &[(Rat, &FourierExpansion)]) -> Result<Self, QSeriesError> {
        Self::combine_impl(terms, true)
    }

    fn combine_impl(
        terms: &[(Rat, &FourierExpansion)],
        allow_mixed: bool,
    ) -> Result<Self, QSeriesError> {
        assert!(!terms.is_empty(), "empty linear combination");
        let field = terms[0].1.field;
        let weight = terms[0].1.weight;
        let mut bound = terms[0].1.trace_bound;
        let mut tag = terms[0].1.char_tag;
        let mut symmetric = true;
        for (_, f) in terms {
            if f.field != field {
                return Err(QSeriesError::FieldMismatch);
            }
            if !allow_mixed && f.weight != weight {
                return Err(QSeriesError::WeightMismatch {
                    left: weight,
                    right: f.weight,
                });
            }
            bound = bound.min(f.trace_bound);
            if f.char_tag != tag {
                tag = None;
            }
            symmetric &= f.symmetric;
        }
        let mut out = FourierExpansion::zero(field, weight, tag, bound);
        out.symmetric = symmetric;
        let mut acc: BTreeMap<HermIndex, Rat> = BTreeMap::new();
        for (c, f) in terms {
            if c.is_zero() {
                continue;
            }
            for (h, v) in &f.coeffs {
                if h.trace() > bound {
                    continue;
                }
                *acc.entry(*h).or_insert_with(Rat::zero) += c * v;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.coeffs = acc;
        Ok(out)
    }

    pub fn add(&self, other: &FourierExpansion) -> Result<Self, QSeriesError> {
        FourierExpansion::linear_combine(&[(Rat::one(), self), (Rat::one(), other)])
    }

    pub fn sub(&self, other: &FourierExpansion) -> Result<Self, QSeriesError> {
        FourierExpansion::linear_combine(&[(Rat::one(), self), (-Rat::one(), other)])
    }

    /// Convolution product: a(FG; H) = sum over decompositions H1 + H2 = H
    /// of a(F;H1) a(G;H2).  Weight adds, char tags add mod w_K, the bound is
    /// the smaller of the two.
    pub fn mul(&self, other: &FourierExpansion) -> Result<Self, QSeriesError> {
        if self.field != other.field {
            return Err(QSeriesError::FieldMismatch);
        }
        let bound = self.trace_bound.min(other.trace_bound);
        let w = self.field.unit_count() as i64;
        let tag = match (self.char_tag, other.char_tag) {
            (Some(a), Some(b)) => Some((a + b).rem_euclid(w)),
            _ => None,
        };
        let mut out = FourierExpansion::zero(self.field, self.weight + other.weight, tag, bound);
        out.symmetric = self.symmetric && other.symmetric;

        // Bucket supports by trace so pairs with trace sum > bound are never
        // touched.
        let bucket = |f: &FourierExpansion| {
            let mut b: Vec<Vec<(HermIndex, Rat)>> = vec![Vec::new(); (bound + 1) as usize];
            for (h, v) in &f.coeffs {
                let t = h.trace();
                if t <= bound {
                    b[t as usize].push((*h, v.clone()));
                }
            }
            b
        };
        let ba = bucket(self);
        let bb = bucket(other);
        let mut acc: BTreeMap<HermIndex, Rat> = BTreeMap::new();
        for t1 in 0..=bound {
            if ba[t1 as usize].is_empty() {
                continue;
            }
            for t2 in 0..=(bound - t1) {
                for (h1, v1) in &ba[t1 as usize] {
                    for (h2, v2) in &bb[t2 as usize] {
                        let h = h1.add(h2);
                        *acc.entry(h).or_insert_with(Rat::zero) += v1 * v2;
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.coeffs = acc;
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, QSeriesError> {
        let mut out = FourierExpansion::one(self.field, self.trace_bound);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Theta operator: multiply the coefficient at H by det(H) = ndet(H)/D_K.
    /// The result is tagged as a theta image of the source weight.
    pub fn theta_op(&self) -> FourierExpansion {
        let dk = number_theory::rat(self.field.disc_abs());
        let mut out = self.clone();
        out.theta_image_of = Some(self.weight);
        out.in_theorem_range = None;
        let mut acc = BTreeMap::new();
        for (h, v) in &self.coeffs {
            let det = number_theory::rat(self.field.ndet(h)) / dk.clone();
            if det.is_zero() {
                continue;
            }
            acc.insert(*h, v * det);
        }
        out.coeffs = acc;
        out
    }

    /// Siegel operator: the one-variable expansion t -> a(F; [t,0,0]).
    pub fn siegel_phi(&self) -> EllipticQExp {
        let mut coeffs = BTreeMap::new();
        for t in 0..=self.trace_bound {
            let v = self.coeff(&HermIndex::new(t, 0, 0, 0));
            if !v.is_zero() {
                coeffs.insert(t, v);
            }
        }
        EllipticQExp {
            weight: self.weight,
            bound: self.trace_bound,
            coeffs,
        }
    }

    /// Restriction to the Siegel half-space (Q(i) only):
    /// a(F|S; [m,r,n]) = sum over b with 4mn - r^2 - b^2 >= 0 of
    /// a(F; [m, r + bi, n]).
    pub fn restrict_siegel(&self) -> Result<BTreeMap<SiegelIndex, Rat>, QSeriesError> {
        if self.field.disc() != -4 {
            return Err(QSeriesError::WrongField {
                wanted: -4,
                got: self.field.disc(),
            });
        }
        let mut out = BTreeMap::new();
        for m in 0..=self.trace_bound {
            for n in 0..=(self.trace_bound - m) {
                let rmax = crate::lambda2::isqrt(4 * m * n);
                for r in -rmax..=rmax {
                    let mut acc = Rat::zero();
                    let bmax = crate::lambda2::isqrt(4 * m * n - r * r);
                    for b in -bmax..=bmax {
                        acc += self.coeff(&HermIndex::from_ab(m, r, b, n));
                    }
                    if !acc.is_zero() {
                        out.insert(SiegelIndex { m, r, n }, acc);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Coefficientwise residues mod p; every stored coefficient must be
    /// p-integral.  Zero residues are kept so callers can scan the support.
    pub fn reduce_mod(&self, p: u64) -> Result<BTreeMap<HermIndex, u64>, QSeriesError> {
        let mut out = BTreeMap::new();
        for (h, v) in &self.coeffs {
            let r = number_theory::residue_mod_p(v, p)
                .map_err(|_| QSeriesError::NotPIntegral { prime: p, at: *h })?;
            out.insert(*h, r);
        }
        Ok(out)
    }

    /// Order of F mod p: the lex-minimal index whose coefficient has a
    /// nonzero residue, or None when every stored residue vanishes (so the
    /// order is infinite up to the carried bound).
    pub fn ord_p(&self, p: u64) -> Result<OrdP, QSeriesError> {
        let residues = self.reduce_mod(p)?;
        let mut min: Option<HermIndex> = None;
        for (h, r) in &residues {
            if *r == 0 {
                continue;
            }
            min = Some(match min {
                None => *h,
                Some(cur) => {
                    if self.field.lex_cmp(h, &cur) == Ordering::Less {
                        *h
                    } else {
                        cur
                    }
                }
            });
        }
        Ok(OrdP {
            index: min,
            bound: self.trace_bound,
        })
    }

    /// Write the expansion in the plain-text exchange format.
    pub fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "hermqexp 1")?;
        writeln!(w, "disc {}", self.field.disc())?;
        writeln!(w, "weight {}", self.weight)?;
        match self.char_tag {
            Some(t) => writeln!(w, "char {t}")?,
            None => writeln!(w, "char unknown")?,
        }
        writeln!(w, "trace {}", self.trace_bound)?;
        writeln!(w, "symmetric {}", self.symmetric)?;
        if let Some(k) = self.theta_image_of {
            writeln!(w, "theta-image-of {k}")?;
        }
        if let Some(flag) = self.in_theorem_range {
            writeln!(w, "in-theorem-range {flag}")?;
        }
        writeln!(w, "begin")?;
        for h in self.support_lex() {
            let v = &self.coeffs[&h];
            writeln!(
                w,
                "{} {} {} {} {} {}",
                h.m,
                h.x,
                h.y,
                h.n,
                v.numer(),
                v.denom()
            )?;
        }
        writeln!(w, "end")
    }

    pub fn read_from<R: BufRead>(r: &mut R) -> Result<Self, QSeriesError> {
        let mut lines = Vec::new();
        for line in r.lines() {
            let line = line.map_err(|e| QSeriesError::ParseError(e.to_string()))?;
            lines.push(line);
        }
        Self::parse_lines(&lines)
    }

    fn parse_lines(lines: &[String]) -> Result<Self, QSeriesError> {
        let err = |s: &str| QSeriesError::ParseError(s.to_string());
        let mut it = lines.iter().map(|s| s.trim()).filter(|s| !s.is_empty());
        let magic = it.next().ok_or_else(|| err("empty file"))?;
        if magic != "hermqexp 1" {
            return Err(err("bad magic"));
        }
        let mut disc = None;
        let mut weight = None;
        let mut char_tag: Option<Option<i64>> = None;
        let mut trace = None;
        let mut symmetric = None;
        let mut theta_image_of = None;
        let mut in_theorem_range = None;
        loop {
            let line = it.next().ok_or_else(|| err("missing begin"))?;
            if line == "begin" {
                break;
            }
            let (key, val) = line.split_once(' ').ok_or_else(|| err("bad header line"))?;
            match key {
                "disc" => disc = Some(val.parse::<i64>().map_err(|_| err("disc"))?),
                "weight" => weight = Some(val.parse::<i64>().map_err(|_| err("weight"))?),
                "char" => {
                    char_tag = Some(if val == "unknown" {
                        None
                    } else {
                        Some(val.parse::<i64>().map_err(|_| err("char"))?)
                    })
                }
                "trace" => trace = Some(val.parse::<i64>().map_err(|_| err("trace"))?),
                "symmetric" => symmetric = Some(val.parse::<bool>().map_err(|_| err("symmetric"))?),
                "theta-image-of" => {
                    theta_image_of = Some(val.parse::<i64>().map_err(|_| err("theta-image-of"))?)
                }
                "in-theorem-range" => {
                    in_theorem_range =
                        Some(val.parse::<bool>().map_err(|_| err("in-theorem-range"))?)
                }
                _ => return Err(err(&format!("unknown header key {key}"))),
            }
        }
        let field = QuadField::new(disc.ok_or_else(|| err("missing disc"))?)
            .map_err(|e| QSeriesError::ParseError(e.to_string()))?;
        let mut out = FourierExpansion::zero(
            field,
            weight.ok_or_else(|| err("missing weight"))?,
            char_tag.ok_or_else(|| err("missing char"))?,
            trace.ok_or_else(|| err("missing trace"))?,
        );
        out.symmetric = symmetric.ok_or_else(|| err("missing symmetric"))?;
        out.theta_image_of = theta_image_of;
        out.in_theorem_range = in_theorem_range;
        for line in it {
            if line == "end" {
                return Ok(out);
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 6 {
                return Err(err("bad record"));
            }
            let nums: Vec<i64> = parts[..4]
                .iter()
                .map(|s| s.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| err("bad index"))?;
            let numer = parts[4]
                .parse::<BigInt>()
                .map_err(|_| err("bad numerator"))?;
            let denom = parts[5]
                .parse::<BigInt>()
                .map_err(|_| err("bad denominator"))?;
            if denom.is_zero() || denom.is_negative() {
                return Err(err("bad denominator"));
            }
            out.set(
                HermIndex::new(nums[0], nums[1], nums[2], nums[3]),
                Rat::new(numer, denom),
            );
        }
        Err(err("missing end"))
    }

    /// Check a(H) = a(conj H) on the stored support.
    pub fn is_conj_symmetric(&self) -> bool {
        self.coeffs
            .iter()
            .all(|(h, v)| *v == self.coeff(&self.field.conj_index(h)))
    }
}

/// Result of an ord_p computation: the minimal nonvanishing index, or
/// infinity as far as the carried trace bound can tell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrdP {
    pub index: Option<HermIndex>,
    pub bound: i64,
}

impl OrdP {
    pub fn is_infinite(&self) -> bool {
        self.index.is_none()
    }
}

/// One-variable q-expansion (image under the Siegel operator).
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticQExp {
    pub weight: i64,
    pub bound: i64,
    pub coeffs: BTreeMap<i64, Rat>,
}

impl EllipticQExp {
    pub fn zero(weight: i64, bound: i64) -> Self {
        EllipticQExp {
            weight,
            bound,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn coeff(&self, n: i64) -> Rat {
        self.coeffs.get(&n).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, n: i64, v: Rat) {
        if v.is_zero() {
            self.coeffs.remove(&n);
        } else {
            self.coeffs.insert(n, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n.
    pub fn eisenstein(k: i64, bound: i64) -> Self {
        let mut e = EllipticQExp::zero(k, bound);
        e.set(0, Rat::one());
        let factor = -number_theory::rat(2 * k) / number_theory::bernoulli(k as usize);
        for n in 1..=bound {
            e.set(
                n,
                factor.clone() * Rat::from_integer(sigma(k as u32 - 1, n)),
            );
        }
        e
    }

    /// Ramanujan's Delta = (E4^3 - E6^2)/1728.
    pub fn delta(bound: i64) -> Self {
        let e4 = EllipticQExp::eisenstein(4, bound);
        let e6 = EllipticQExp::eisenstein(6, bound);
        let d = e4
            .mul(&e4)
            .mul(&e4)
            .sub(&e6.mul(&e6))
            .scaled(&number_theory::ratio(1, 1728));
        EllipticQExp { weight: 12, ..d }
    }

    pub fn mul(&self, other: &EllipticQExp) -> EllipticQExp {
        let bound = self.bound.min(other.bound);
        let mut out = EllipticQExp::zero(self.weight + other.weight, bound);
        for (n1, v1) in &self.coeffs {
            if *n1 > bound {
                continue;
            }
            for (n2, v2) in &other.coeffs {
                if n1 + n2 > bound {
                    continue;
                }
                let cur = out.coeff(n1 + n2) + v1 * v2;
                out.set(n1 + n2, cur);
            }
        }
        out
    }

    pub fn sub(&self, other: &EllipticQExp) -> EllipticQExp {
        let bound = self.bound.min(other.bound);
        let mut out = self.clone();
        out.bound = bound;
        out.coeffs.retain(|n, _| *n <= bound);
        for (n, v) in &other.coeffs {
            if *n > bound {
                continue;
            }
            let cur = out.coeff(*n) - v;
            out.set(*n, cur);
        }
        out
    }

    pub fn scaled(&self, c: &Rat) -> EllipticQExp {
        let mut out = self.clone();
        if c.is_zero() {
            out.coeffs.clear();
            return out;
        }
        for v in out.coeffs.values_mut() {
            *v *= c;
        }
        out
    }

    pub fn agrees_with(&self, other: &EllipticQExp, bound: i64) -> bool {
        let bound = bound.min(self.bound).min(other.bound);
        (0..=bound).all(|n| self.coeff(n) == other.coeff(n))
    }
}

/// Divisor power sum sigma_e(n).
pub fn sigma(e: u32, n: i64) -> BigInt {
    assert!(n > 0);
    let mut acc = BigInt::zero();
    for d in 1..=n {
        if n % d == 0 {
            acc += BigInt::from(d).pow(e);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::{rat, ratio};

    fn qi() -> QuadField {
        QuadField::gaussian()
    }

    /// Small dense test expansion with coefficients from a fixed pattern.
    fn pattern_expansion(field: QuadField, bound: i64, seed: i64) -> FourierExpansion {
        let mut f = FourierExpansion::zero(field, 0, Some(0), bound);
        for (i, h) in field.enumerate_psd(bound).into_iter().enumerate() {
            // values in {-2..2}, deterministic
            let v = ((i as i64 * 7 + seed * 13) % 5) - 2;
            f.set(h, rat(v));
        }
        f
    }

    #[test]
    fn mul_matches_decompose_pairs_definition() {
        let k = qi();
        let f = pattern_expansion(k, 4, 1);
        let g = pattern_expansion(k, 4, 2);
        let prod = f.mul(&g).unwrap();
        for h in k.enumerate_psd(4) {
            let mut acc = Rat::zero();
            for (h1, h2) in k.decompose_pairs(&h) {
                acc += f.coeff(&h1) * g.coeff(&h2);
            }
            assert_eq!(prod.coeff(&h), acc, "definition check at {h}");
        }
    }

    #[test]
    fn ring_laws_small_scale() {
        let k = qi();
        let a = pattern_expansion(k, 4, 1);
        let b = pattern_expansion(k, 4, 2);
        let c = pattern_expansion(k, 4, 3);
        let ab = a.mul(&b).unwrap();
        let ba = b.mul(&a).unwrap();
        assert!(ab.agrees_with(&ba, 4), "commutativity");
        let ab_c = ab.mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        assert!(ab_c.agrees_with(&a_bc, 4), "associativity");
        let one = FourierExpansion::one(k, 4);
        assert!(a.mul(&one).unwrap().agrees_with(&a, 4), "identity");
    }

    #[test]
    fn linear_combine_rules() {
        let k = qi();
        let f = pattern_expansion(k, 3, 1);
        let zero = f.sub(&f).unwrap();
        assert!(zero.is_zero());

        let mut g = pattern_expansion(k, 3, 2);
        g.weight = 8;
        assert!(matches!(
            FourierExpansion::linear_combine(&[(rat(1), &f), (rat(1), &g)]),
            Err(QSeriesError::WeightMismatch { .. })
        ));
        assert!(FourierExpansion::linear_combine_mixed(&[(rat(1), &f), (rat(1), &g)]).is_ok());
    }

    #[test]
    fn theta_op_kills_rank_le_one_and_is_linear() {
        let k = qi();
        let f = pattern_expansion(k, 4, 1);
        let tf = f.theta_op();
        for h in k.enumerate_psd(4) {
            if k.ndet(&h) == 0 {
                assert!(tf.coeff(&h).is_zero(), "rank <= 1 must vanish at {h}");
            } else {
                assert_eq!(tf.coeff(&h), f.coeff(&h) * ratio(k.ndet(&h), 4));
            }
        }
        let g = pattern_expansion(k, 4, 2);
        let sum = f.add(&g).unwrap();
        assert!(sum
            .theta_op()
            .agrees_with(&tf.add(&g.theta_op()).unwrap(), 4));
        let scaled = f.scaled(&rat(3));
        assert!(scaled.theta_op().agrees_with(&tf.scaled(&rat(3)), 4));
        assert_eq!(tf.theta_image_of, Some(f.weight));
    }

    #[test]
    fn theta_op_preserves_conj_symmetry() {
        let k = qi();
        let mut f = FourierExpansion::zero(k, 4, Some(0), 3);
        // symmetric pair
        f.set(HermIndex::from_ab(1, 1, 1, 1), rat(5));
        f.set(HermIndex::from_ab(1, 1, -1, 1), rat(5));
        assert!(f.is_conj_symmetric());
        assert!(f.theta_op().is_conj_symmetric());
    }

    #[test]
    fn siegel_phi_reads_rank_one_column_and_commutes_with_sums() {
        let k = qi();
        let f = pattern_expansion(k, 4, 1);
        let g = pattern_expansion(k, 4, 2);
        let phi_f = f.siegel_phi();
        for t in 0..=4 {
            assert_eq!(phi_f.coeff(t), f.coeff(&HermIndex::new(t, 0, 0, 0)));
        }
        let combo = FourierExpansion::linear_combine(&[(rat(2), &f), (rat(-3), &g)]).unwrap();
        let lhs = combo.siegel_phi();
        let rhs = phi_f.scaled(&rat(2)).sub(&g.siegel_phi().scaled(&rat(3)));
        assert!(lhs.agrees_with(&rhs, 4));

        let one = FourierExpansion::one(k, 4);
        assert_eq!(one.siegel_phi().coeff(0), rat(1));
    }

    #[test]
    fn restriction_needs_gaussian_field() {
        let e = QuadField::eisenstein();
        let f = pattern_expansion(e, 2, 1);
        assert!(matches!(
            f.restrict_siegel(),
            Err(QSeriesError::WrongField { .. })
        ));
    }

    #[test]
    fn restriction_sums_over_b() {
        let k = qi();
        let mut f = FourierExpansion::zero(k, 4, Some(0), 2);
        // a(F|S; [1,0,1]) should collect b in {-2..2}
        for b in -2..=2 {
            f.set(HermIndex::from_ab(1, 0, b, 1), rat(10 + b));
        }
        // and a(F|S; [1,2,1]) only b = 0
        f.set(HermIndex::from_ab(1, 2, 0, 1), rat(7));
        let r = f.restrict_siegel().unwrap();
        assert_eq!(r[&SiegelIndex { m: 1, r: 0, n: 1 }], rat(50));
        assert_eq!(r[&SiegelIndex { m: 1, r: 2, n: 1 }], rat(7));
        assert!(
            !r.contains_key(&SiegelIndex { m: 1, r: 3, n: 1 }),
            "4mn < r^2"
        );
    }

    #[test]
    fn reduce_mod_and_ord_p() {
        let k = qi();
        let mut f = FourierExpansion::zero(k, 4, Some(0), 2);
        f.set(HermIndex::ZERO, rat(14));
        f.set(HermIndex::from_ab(1, 0, 0, 0), rat(3));
        let r = f.reduce_mod(7).unwrap();
        assert_eq!(r[&HermIndex::ZERO], 0);
        assert_eq!(r[&HermIndex::from_ab(1, 0, 0, 0)], 3);
        let ord = f.ord_p(7).unwrap();
        assert_eq!(ord.index, Some(HermIndex::from_ab(1, 0, 0, 0)));

        let g = f.scaled(&rat(7));
        assert!(g.ord_p(7).unwrap().is_infinite());

        let mut bad = FourierExpansion::zero(k, 4, Some(0), 2);
        bad.set(HermIndex::ZERO, ratio(1, 7));
        assert!(matches!(
            bad.reduce_mod(7),
            Err(QSeriesError::NotPIntegral {
                prime: 7,
                at: HermIndex { m: 0, .. }
            })
        ));
    }

    #[test]
    fn serialization_round_trip_is_exact() {
        let k = qi();
        let mut f = pattern_expansion(k, 3, 2);
        f.weight = 8;
        f.char_tag = Some(1);
        f.set(HermIndex::from_ab(1, 1, 1, 1), ratio(-355, 113));
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let g = FourierExpansion::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(f.field, g.field);
        assert_eq!(f.weight, g.weight);
        assert_eq!(f.char_tag, g.char_tag);
        assert_eq!(f.trace_bound, g.trace_bound);
        assert_eq!(f.symmetric, g.symmetric);
        assert!(f.agrees_with(&g, 3));
        // byte-identical re-serialization
        let mut buf2 = Vec::new();
        g.write_to(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn elliptic_eisenstein_values() {
        let e4 = EllipticQExp::eisenstein(4, 8);
        assert_eq!(e4.coeff(0), rat(1));
        assert_eq!(e4.coeff(1), rat(240));
        assert_eq!(e4.coeff(2), rat(2160));
        let e6 = EllipticQExp::eisenstein(6, 8);
        assert_eq!(e6.coeff(1), rat(-504));
        let delta = EllipticQExp::delta(8);
        assert_eq!(delta.coeff(0), rat(0));
        assert_eq!(delta.coeff(1), rat(1));
        assert_eq!(delta.coeff(2), rat(-24));
        assert_eq!(delta.coeff(3), rat(252));
    }
}
