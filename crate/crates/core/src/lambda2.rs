//! The index lattice of half-integral Hermitian 2x2 matrices.
//!
//! An index H = [m, c, n] has integer diagonal m, n and off-diagonal
//! h_12 = c / sqrt(d_K) with c in O_K, stored as the coordinate pair (x, y)
//! of c = x + y*omega in the integral basis {1, omega}.  For K = Q(i) this
//! recovers the classical abbreviation [m, a+bi, n] with h_12 = (a+bi)/2:
//! there c = i(a+bi), so a = y and b = -x.
//!
//! The scaled determinant `ndet(H) = D_K * det(H) = D_K*m*n - Nm(c)` is an
//! integer ("4 det(H)" over Q(i)); H is positive semidefinite exactly when
//! m, n, ndet are all nonnegative.
//!
//! The lexicographic order compares (tr, m, a, b) over Q(i) — the order used
//! by the Sturm-bound machinery — and (tr, m, x, y) over other fields, where
//! it only serves as a deterministic output order.

use std::cmp::Ordering;
use std::fmt;

use crate::number_theory::QuadField;

/// An element of the index lattice, as integer coordinates (m, x, y, n).
/// The field is carried by the containing expansion, not the index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermIndex {
    pub m: i64,
    pub x: i64,
    pub y: i64,
    pub n: i64,
}

/// Half-integral Siegel index [m, r, n] (off-diagonal r/2); psd iff
/// m, n >= 0 and 4mn - r^2 >= 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SiegelIndex {
    pub m: i64,
    pub r: i64,
    pub n: i64,
}

impl SiegelIndex {
    pub fn is_psd(&self) -> bool {
        self.m >= 0 && self.n >= 0 && 4 * self.m * self.n - self.r * self.r >= 0
    }
}

impl HermIndex {
    pub const ZERO: HermIndex = HermIndex {
        m: 0,
        x: 0,
        y: 0,
        n: 0,
    };

    pub fn new(m: i64, x: i64, y: i64, n: i64) -> Self {
        HermIndex { m, x, y, n }
    }

    /// Build a Q(i) index from the classical coordinates [m, a+bi, n].
    pub fn from_ab(m: i64, a: i64, b: i64, n: i64) -> Self {
        HermIndex { m, x: -b, y: a, n }
    }

    /// Classical a-coordinate over Q(i).
    pub fn a(&self) -> i64 {
        self.y
    }

    /// Classical b-coordinate over Q(i).
    pub fn b(&self) -> i64 {
        -self.x
    }

    pub fn trace(&self) -> i64 {
        self.m + self.n
    }

    pub fn is_zero(&self) -> bool {
        *self == HermIndex::ZERO
    }

    pub fn add(&self, other: &HermIndex) -> HermIndex {
        HermIndex {
            m: self.m + other.m,
            x: self.x + other.x,
            y: self.y + other.y,
            n: self.n + other.n,
        }
    }

    pub fn sub(&self, other: &HermIndex) -> HermIndex {
        HermIndex {
            m: self.m - other.m,
            x: self.x - other.x,
            y: self.y - other.y,
            n: self.n - other.n,
        }
    }

    pub fn scale(&self, l: i64) -> HermIndex {
        HermIndex {
            m: self.m * l,
            x: self.x * l,
            y: self.y * l,
            n: self.n * l,
        }
    }

    /// Content of a nonzero index: the largest l with H/l still in the
    /// lattice, i.e. gcd of the four coordinates.
    pub fn epsilon(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let mut g = 0i64;
        for v in [self.m, self.x, self.y, self.n] {
            g = gcd(g, v);
        }
        Some(g)
    }

    /// Render over Q(i) in the classical bracket form, e.g. "[1,1+i,1]".
    pub fn render_qi(&self) -> String {
        format!(
            "[{},{},{}]",
            self.m,
            render_gauss(self.a(), self.b()),
            self.n
        )
    }

    /// Parse the classical bracket form, accepting exactly what
    /// `render_qi` emits (plus optional spaces after commas).
    pub fn parse_qi(s: &str) -> Option<HermIndex> {
        let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
        let parts: Vec<&str> = split_top_level(inner);
        if parts.len() != 3 {
            return None;
        }
        let m: i64 = parts[0].trim().parse().ok()?;
        let n: i64 = parts[2].trim().parse().ok()?;
        let (a, b) = parse_gauss(parts[1].trim())?;
        Some(HermIndex::from_ab(m, a, b, n))
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    s.split(',').collect()
}

fn render_gauss(a: i64, b: i64) -> String {
    match (a, b) {
        (_, 0) => format!("{a}"),
        (0, 1) => "i".to_string(),
        (0, -1) => "-i".to_string(),
        (0, _) => format!("{b}i"),
        (_, 1) => format!("{a}+i"),
        (_, -1) => format!("{a}-i"),
        (_, _) if b > 0 => format!("{a}+{b}i"),
        (_, _) => format!("{a}{b}i"),
    }
}

fn parse_gauss(s: &str) -> Option<(i64, i64)> {
    if let Some(head) = s.strip_suffix('i') {
        // Forms: "i", "-i", "3i", "a+bi", "a-bi", "a+i", "a-i".
        if head.is_empty() {
            return Some((0, 1));
        }
        if head == "-" {
            return Some((0, -1));
        }
        // Split the b part off at the last +/- that is not the leading sign.
        let bytes = head.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            if bytes[i] == b'+' || bytes[i] == b'-' {
                split = Some(i);
                break;
            }
        }
        match split {
            None => {
                let b: i64 = head.parse().ok()?;
                Some((0, b))
            }
            Some(i) => {
                let a: i64 = head[..i].parse().ok()?;
                let bpart = &head[i..];
                let b: i64 = if bpart == "+" {
                    1
                } else if bpart == "-" {
                    -1
                } else {
                    bpart.parse().ok()?
                };
                Some((a, b))
            }
        }
    } else {
        let a: i64 = s.parse().ok()?;
        Some((a, 0))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn isqrt(n: i64) -> i64 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl QuadField {
    /// Norm of c = x + y*omega in O_K.
    pub fn norm(&self, x: i64, y: i64) -> i64 {
        let dk = self.disc_abs();
        if self.disc() % 4 == 0 {
            // omega = sqrt(d)/2, Nm = x^2 + (D/4) y^2
            x * x + (dk / 4) * y * y
        } else {
            // omega = (1+sqrt(d))/2, Nm = x^2 + xy + ((1+D)/4) y^2
            x * x + x * y + ((1 + dk) / 4) * y * y
        }
    }

    /// Conjugate index: h_12 -> conj(h_12), i.e. c -> -conj(c).
    pub fn conj_index(&self, h: &HermIndex) -> HermIndex {
        if self.disc() % 4 == 0 {
            HermIndex {
                m: h.m,
                x: -h.x,
                y: h.y,
                n: h.n,
            }
        } else {
            HermIndex {
                m: h.m,
                x: -(h.x + h.y),
                y: h.y,
                n: h.n,
            }
        }
    }

    /// D_K * det(H), a (signed) integer.
    pub fn ndet(&self, h: &HermIndex) -> i64 {
        self.disc_abs() * h.m * h.n - self.norm(h.x, h.y)
    }

    pub fn is_psd(&self, h: &HermIndex) -> bool {
        h.m >= 0 && h.n >= 0 && self.ndet(h) >= 0
    }

    /// Rank of a psd index: 0, 1 or 2.
    pub fn rank(&self, h: &HermIndex) -> u32 {
        debug_assert!(self.is_psd(h));
        if self.ndet(h) > 0 {
            2
        } else if h.is_zero() {
            0
        } else {
            1
        }
    }

    /// The four-rule lexicographic comparison: trace, then m, then the
    /// off-diagonal coordinates ((a, b) over Q(i), (x, y) elsewhere).
    pub fn lex_cmp(&self, h1: &HermIndex, h2: &HermIndex) -> Ordering {
        let key = |h: &HermIndex| {
            if self.disc() == -4 {
                (h.trace(), h.m, h.a(), h.b())
            } else {
                (h.trace(), h.m, h.x, h.y)
            }
        };
        key(h1).cmp(&key(h2))
    }

    /// All psd indices of trace <= t_max, each exactly once, in lex order.
    pub fn enumerate_psd(&self, t_max: i64) -> Vec<HermIndex> {
        let mut out = Vec::new();
        for t in 0..=t_max {
            for m in 0..=t {
                let n = t - m;
                self.off_diagonals(m, n, |x, y| {
                    out.push(HermIndex { m, x, y, n });
                });
            }
        }
        out.sort_by(|a, b| self.lex_cmp(a, b));
        out
    }

    /// Visit all (x, y) with Nm(x + y*omega) <= D_K * m * n.
    fn off_diagonals<F: FnMut(i64, i64)>(&self, m: i64, n: i64, mut f: F) {
        let bound = self.disc_abs() * m * n;
        if bound < 0 {
            return;
        }
        // (D/4) y^2 <= bound in both basis cases implies y^2 <= 4mn.
        let ymax = isqrt(4 * m * n);
        for y in -ymax..=ymax {
            let xslack = isqrt(bound) + y.abs();
            for x in -xslack..=xslack {
                if self.norm(x, y) <= bound {
                    f(x, y);
                }
            }
        }
    }

    /// All ordered pairs (H1, H2) of psd indices with H1 + H2 = H.
    pub fn decompose_pairs(&self, h: &HermIndex) -> Vec<(HermIndex, HermIndex)> {
        debug_assert!(self.is_psd(h));
        let mut out = Vec::new();
        for m1 in 0..=h.m {
            for n1 in 0..=h.n {
                self.off_diagonals(m1, n1, |x1, y1| {
                    let h1 = HermIndex {
                        m: m1,
                        x: x1,
                        y: y1,
                        n: n1,
                    };
                    let h2 = h.sub(&h1);
                    if self.is_psd(&h2) {
                        out.push((h1, h2));
                    }
                });
            }
        }
        out.sort_by(|p, q| {
            self.lex_cmp(&p.0, &q.0)
                .then_with(|| self.lex_cmp(&p.1, &q.1))
        });
        out
    }

    /// Basis of the sublattice sqrt(d_K) O_K of O_K, in coordinates.
    /// Translating the off-diagonal by m times this lattice is the unipotent
    /// part of the GL_2(O_K) action on indices.
    fn sqrt_d_lattice(&self) -> [(i64, i64); 2] {
        let d = self.disc();
        if d % 4 == 0 {
            // sqrt(d) = 2 omega: sqrt(d) * 1 = (0, 2), sqrt(d) * omega = (d/2, 0)
            [(0, 2), (d / 2, 0)]
        } else {
            // sqrt(d) = 2 omega - 1
            [(-1, 2), ((d - 1) / 2, 1)]
        }
    }

    /// Representative of the full GL_2(O_K)-equivalence class of a psd
    /// index: reduce by off-diagonal translations and diagonal swaps until
    /// minimal, then pick the canonical unit/conjugation form.  Coefficients
    /// of symmetric forms with trivial-acting character are constant on
    /// these classes.
    pub fn reduced_rep(&self, h: &HermIndex) -> HermIndex {
        debug_assert!(self.is_psd(h));
        if h.is_zero() {
            return *h;
        }
        let dk = self.disc_abs();
        let ndet = self.ndet(h);
        let basis = self.sqrt_d_lattice();
        let mut cur = *h;
        loop {
            if cur.m > cur.n {
                let cc = self.conj_index(&cur);
                cur = HermIndex {
                    m: cc.n,
                    x: cc.x,
                    y: cc.y,
                    n: cc.m,
                };
            }
            if cur.m == 0 {
                break; // rank <= 1 with zero upper-left stays diagonal-ish
            }
            // minimize Nm(c + m * sqrt(d) * t) over t in a covering box
            let span = 3 + isqrt(self.norm(cur.x, cur.y)) / cur.m;
            let mut best = (cur.x, cur.y);
            let mut best_norm = self.norm(cur.x, cur.y);
            for s in -span..=span {
                for t in -span..=span {
                    let x = cur.x + cur.m * (s * basis[0].0 + t * basis[1].0);
                    let y = cur.y + cur.m * (s * basis[0].1 + t * basis[1].1);
                    let nm = self.norm(x, y);
                    if nm < best_norm || (nm == best_norm && (x, y) < best) {
                        best = (x, y);
                        best_norm = nm;
                    }
                }
            }
            let new_n = (ndet + best_norm) / (dk * cur.m);
            debug_assert_eq!((ndet + best_norm) % (dk * cur.m), 0);
            let next = HermIndex {
                m: cur.m,
                x: best.0,
                y: best.1,
                n: new_n,
            };
            if next == cur || (next.n >= cur.n && best_norm >= self.norm(cur.x, cur.y)) {
                break;
            }
            cur = next;
        }
        self.canonical_rep(&cur)
    }

    /// Canonical representative of the unit/conjugation/transposition orbit
    /// of a psd index.  Over Q(i) the result has m <= n and 0 <= b <= a,
    /// matching the labels used in printed coefficient tables.
    pub fn canonical_rep(&self, h: &HermIndex) -> HermIndex {
        let mut best = *h;
        let mut candidates = vec![*h];
        if self.disc() == -4 {
            // unit multiples c -> u*c: (a,b) -> (-b,a) generates the 4 rotations
            let mut cur = *h;
            for _ in 0..3 {
                cur = HermIndex::from_ab(cur.m, -cur.b(), cur.a(), cur.n);
                candidates.push(cur);
            }
        }
        let with_conj: Vec<HermIndex> = candidates.iter().map(|c| self.conj_index(c)).collect();
        candidates.extend(with_conj);
        let with_swap: Vec<HermIndex> = candidates
            .iter()
            .map(|c| {
                let cc = self.conj_index(c);
                HermIndex {
                    m: cc.n,
                    x: cc.x,
                    y: cc.y,
                    n: cc.m,
                }
            })
            .collect();
        candidates.extend(with_swap);
        let key = |c: &HermIndex| {
            let nonneg = if self.disc() == -4 {
                (c.a() >= 0 && c.b() >= 0 && c.b() <= c.a() && c.m <= c.n) as i64
            } else {
                (c.x >= 0 && c.y >= 0 && c.m <= c.n) as i64
            };
            // prefer canonical-quadrant representatives, then lex order
            (-nonneg, c.m, c.x, c.y, c.n)
        };
        for c in candidates {
            if key(&c) < key(&best) {
                best = c;
            }
        }
        best
    }
}

impl fmt::Display for HermIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display uses the raw coordinates; use render_qi for the classical
        // Q(i) bracket form.
        write!(f, "[{},({},{}),{}]", self.m, self.x, self.y, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi() -> QuadField {
        QuadField::gaussian()
    }

    #[test]
    fn ndet_examples() {
        let k = qi();
        assert_eq!(k.ndet(&HermIndex::from_ab(1, 1, 1, 1)), 2);
        assert_eq!(k.ndet(&HermIndex::from_ab(2, 1, 0, 2)), 15);
        assert_eq!(k.ndet(&HermIndex::from_ab(1, 0, 0, 0)), 0);
    }

    #[test]
    fn ndet_scales_quadratically() {
        let k = qi();
        for h in k.enumerate_psd(3) {
            for l in 0..=4 {
                assert_eq!(k.ndet(&h.scale(l)), l * l * k.ndet(&h));
            }
        }
    }

    #[test]
    fn epsilon_examples_and_defining_maximum() {
        let k = qi();
        assert_eq!(HermIndex::from_ab(1, 1, 1, 1).epsilon(), Some(1));
        assert_eq!(HermIndex::from_ab(2, 2, 2, 2).epsilon(), Some(2));
        assert_eq!(HermIndex::from_ab(4, 0, 0, 2).epsilon(), Some(2));
        assert_eq!(HermIndex::ZERO.epsilon(), None);

        // gcd equals the defining maximum: l^-1 H is in the lattice for
        // l = eps and for no larger l up to the trace.
        for h in k.enumerate_psd(5) {
            if h.is_zero() {
                continue;
            }
            let eps = h.epsilon().unwrap();
            let divides = |l: i64| h.m % l == 0 && h.x % l == 0 && h.y % l == 0 && h.n % l == 0;
            assert!(divides(eps));
            for l in (eps + 1)..=h.trace().max(1) {
                assert!(!divides(l), "l={l} should not divide H={h} with eps={eps}");
            }
        }
    }

    #[test]
    fn epsilon_is_homogeneous() {
        let k = qi();
        for h in k.enumerate_psd(4) {
            if h.is_zero() {
                continue;
            }
            for l in 1..=5 {
                assert_eq!(h.scale(l).epsilon(), Some(l * h.epsilon().unwrap()));
            }
        }
    }

    #[test]
    fn enumerate_small_traces() {
        let k = qi();
        let t1 = k.enumerate_psd(1);
        assert_eq!(t1.len(), 3);
        assert!(t1.contains(&HermIndex::ZERO));
        assert!(t1.contains(&HermIndex::from_ab(1, 0, 0, 0)));
        assert!(t1.contains(&HermIndex::from_ab(0, 0, 0, 1)));

        let t2 = k.enumerate_psd(2);
        assert!(t2.contains(&HermIndex::from_ab(1, 1, 1, 1)));
        assert!(t2.contains(&HermIndex::from_ab(1, 2, 0, 1)));
        assert!(!t2.contains(&HermIndex::from_ab(1, 2, 1, 1)), "norm 5 > 4");
    }

    #[test]
    fn enumerate_matches_brute_force_box() {
        for &d in &[-4i64, -3, -20] {
            let k = QuadField::new(d).unwrap();
            for t in 0..=4 {
                let fast = k.enumerate_psd(t);
                // independent box scan
                let mut slow = Vec::new();
                let dk = k.disc_abs();
                for m in 0..=t {
                    for n in 0..=(t - m) {
                        let cb = dk * t * t;
                        for x in -cb..=cb {
                            for y in -cb..=cb {
                                let h = HermIndex { m, x, y, n };
                                if k.is_psd(&h) {
                                    slow.push(h);
                                }
                            }
                        }
                    }
                }
                slow.sort_by(|a, b| k.lex_cmp(a, b));
                assert_eq!(fast, slow, "enumerate_psd mismatch at d={d}, t={t}");
            }
        }
    }

    #[test]
    fn eisenstein_field_unit_norm_count() {
        // Over Z[omega] the ball Nm <= 3 contains 1 + 6 + 6 = 13 points
        // (zero, six units, six elements of norm 3), so there are 13 indices
        // with m = n = 1.
        let k = QuadField::eisenstein();
        let count = k
            .enumerate_psd(2)
            .into_iter()
            .filter(|h| h.m == 1 && h.n == 1)
            .count();
        assert_eq!(count, 13);
    }

    #[test]
    fn decompose_pairs_examples() {
        let k = qi();
        let rank1 = HermIndex::from_ab(1, 0, 0, 0);
        let pairs = k.decompose_pairs(&rank1);
        assert_eq!(pairs.len(), 2);
        assert!(pairs.contains(&(HermIndex::ZERO, rank1)));
        assert!(pairs.contains(&(rank1, HermIndex::ZERO)));

        let diag = HermIndex::from_ab(1, 0, 0, 1);
        let pairs = k.decompose_pairs(&diag);
        assert_eq!(pairs.len(), 4);
        assert!(pairs.contains(&(
            HermIndex::from_ab(1, 0, 0, 0),
            HermIndex::from_ab(0, 0, 0, 1)
        )));

        let h = HermIndex::from_ab(1, 1, 1, 1);
        let pairs = k.decompose_pairs(&h);
        assert_eq!(pairs.len(), 2, "off-diagonal cannot be shared");
    }

    #[test]
    fn decompose_pairs_sum_and_symmetry() {
        let k = qi();
        for h in k.enumerate_psd(4) {
            let pairs = k.decompose_pairs(&h);
            for (h1, h2) in &pairs {
                assert_eq!(h1.add(h2), h);
                assert!(k.is_psd(h1) && k.is_psd(h2));
                assert!(pairs.contains(&(*h2, *h1)), "swapped pair listed");
            }
            // brute-force recount over the coordinate box
            let mut count = 0;
            for m1 in 0..=h.m {
                for n1 in 0..=h.n {
                    let bound = k.disc_abs() * h.m * h.n + k.norm(h.x, h.y);
                    for x1 in -bound..=bound {
                        for y1 in -bound..=bound {
                            let h1 = HermIndex {
                                m: m1,
                                x: x1,
                                y: y1,
                                n: n1,
                            };
                            if k.is_psd(&h1) && k.is_psd(&h.sub(&h1)) {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(pairs.len(), count, "recount at H={h}");
        }
    }

    #[test]
    fn lex_cmp_examples() {
        let k = qi();
        let cmp = |h1: HermIndex, h2: HermIndex| k.lex_cmp(&h1, &h2);
        assert_eq!(
            cmp(
                HermIndex::from_ab(1, 1, 0, 1),
                HermIndex::from_ab(2, 2, 0, 1)
            ),
            Ordering::Less,
            "trace rule"
        );
        assert_eq!(
            cmp(
                HermIndex::from_ab(1, 0, 0, 1),
                HermIndex::from_ab(1, 1, 0, 1)
            ),
            Ordering::Less,
            "a rule"
        );
        assert_eq!(
            cmp(
                HermIndex::from_ab(1, 1, 0, 1),
                HermIndex::from_ab(1, 1, 1, 1)
            ),
            Ordering::Less,
            "b rule"
        );
    }

    #[test]
    fn lex_total_order_properties() {
        let k = qi();
        let all = k.enumerate_psd(6);
        // trichotomy + antisymmetry: equal iff identical
        for (i, h1) in all.iter().enumerate() {
            for h2 in &all[i..] {
                let c = k.lex_cmp(h1, h2);
                if c == Ordering::Equal {
                    assert_eq!(h1, h2);
                } else {
                    assert_eq!(k.lex_cmp(h2, h1), c.reverse());
                }
            }
        }
        // transitivity on a subsample
        let step = 7;
        let sub: Vec<_> = all.iter().step_by(step).collect();
        for a in &sub {
            for b in &sub {
                for c in &sub {
                    if k.lex_cmp(a, b) != Ordering::Greater && k.lex_cmp(b, c) != Ordering::Greater
                    {
                        assert_ne!(k.lex_cmp(a, c), Ordering::Greater);
                    }
                }
            }
        }
    }

    #[test]
    fn render_and_parse_qi() {
        let cases = [
            (HermIndex::from_ab(1, 1, 1, 1), "[1,1+i,1]"),
            (HermIndex::from_ab(2, 1, 0, 2), "[2,1,2]"),
            (HermIndex::from_ab(1, 0, 0, 1), "[1,0,1]"),
            (HermIndex::from_ab(2, 2, 2, 2), "[2,2+2i,2]"),
            (HermIndex::from_ab(3, 3, -3, 3), "[3,3-3i,3]"),
            (HermIndex::from_ab(1, 0, 1, 0), "[1,i,0]"),
            (HermIndex::from_ab(1, 0, -2, 3), "[1,-2i,3]"),
        ];
        for (h, s) in cases {
            assert_eq!(h.render_qi(), s);
            assert_eq!(HermIndex::parse_qi(s), Some(h), "parse {s}");
        }
    }

    #[test]
    fn reduction_finds_equivalent_low_trace_representatives() {
        let k = qi();
        // [2,3+2i,3] is equivalent to [2,2+i,2] (translate the off-diagonal
        // by 2 sqrt(d) O, then normalize units)
        assert_eq!(
            k.reduced_rep(&HermIndex::from_ab(2, 3, 2, 3)),
            HermIndex::from_ab(2, 2, 1, 2)
        );
        // [2,4,4] is equivalent to the diagonal [2,0,2]
        assert_eq!(
            k.reduced_rep(&HermIndex::from_ab(2, 4, 0, 4)),
            HermIndex::from_ab(2, 0, 0, 2)
        );
        // rank-1 indices reduce to the diagonal of their content
        assert_eq!(
            k.reduced_rep(&HermIndex::from_ab(1, 2, 0, 1)),
            HermIndex::new(0, 0, 0, 1)
        );
        assert_eq!(
            k.reduced_rep(&HermIndex::from_ab(2, 2, 2, 2).scale(1)),
            k.reduced_rep(&HermIndex::from_ab(1, 1, 1, 1).scale(2))
        );
        // idempotent and invariant under the small symmetries
        for h in k.enumerate_psd(5) {
            let rep = k.reduced_rep(&h);
            assert!(k.is_psd(&rep));
            assert_eq!(k.ndet(&rep), k.ndet(&h), "determinant preserved at {h}");
            assert_eq!(rep.epsilon(), h.epsilon(), "content preserved at {h}");
            assert_eq!(k.reduced_rep(&rep), rep, "idempotent at {h}");
            assert_eq!(k.reduced_rep(&k.conj_index(&h)), rep);
            assert!(rep.trace() <= h.trace(), "reduction never grows the trace");
        }
    }

    #[test]
    fn canonical_rep_is_orbit_invariant() {
        let k = qi();
        for h in k.enumerate_psd(4) {
            let rep = k.canonical_rep(&h);
            assert_eq!(k.ndet(&rep), k.ndet(&h));
            assert_eq!(rep.epsilon(), h.epsilon());
            assert!(rep.a() >= 0 && rep.b() >= 0 && rep.b() <= rep.a());
            assert!(rep.m <= rep.n);
            assert_eq!(k.canonical_rep(&rep), rep, "idempotent");
            assert_eq!(
                k.canonical_rep(&k.conj_index(&h)),
                rep,
                "conjugate in same class"
            );
        }
    }
}
