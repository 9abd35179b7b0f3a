//! On-disk caching of expansions and of the generator set.
//!
//! A cached expansion is reused only when discriminant, weight, trace
//! bound, format version and (for theta-derived data) the calibration
//! constant all match; anything else recomputes.  Files use the plain-text
//! expansion format, so caches double as export artifacts.

use std::fs;
use std::io::{self, BufReader};
use std::path::{Path, PathBuf};

use num::bigint::BigInt;

use crate::graded_ring::{GeneratorSet, RingData};
use crate::number_theory::Rat;
use crate::qseries::FourierExpansion;
use crate::theta::Kappa;

pub const FORMAT_VERSION: u32 = 1;

/// File name for a cached Eisenstein expansion.
pub fn eisenstein_file(disc: i64, weight: i64, trace: i64) -> String {
    format!("eis_d{disc}_k{weight}_t{trace}_v{FORMAT_VERSION}.qexp")
}

pub fn load_expansion(path: &Path) -> Option<FourierExpansion> {
    let file = fs::File::open(path).ok()?;
    FourierExpansion::read_from(&mut BufReader::new(file)).ok()
}

pub fn store_expansion(path: &Path, f: &FourierExpansion) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut buf = Vec::new();
    f.write_to(&mut buf)?;
    fs::write(path, buf)
}

fn gen_dir(root: &Path, trace: i64) -> PathBuf {
    root.join(format!("generators_t{trace}_v{FORMAT_VERSION}"))
}

const GEN_FILES: [&str; 10] = [
    "e4",
    "e6",
    "chi8",
    "f10",
    "f12",
    "e8",
    "e12",
    "psi8",
    "psi12",
    "theta_leech",
];

/// Persist a generator build: one expansion file per form plus a manifest
/// recording the calibration constant and the chi_8 normalization scale.
pub fn store_ring(root: &Path, ring: &RingData) -> io::Result<()> {
    let dir = gen_dir(root, ring.trace_bound);
    fs::create_dir_all(&dir)?;
    let forms: [(&str, &FourierExpansion); 10] = [
        ("e4", &ring.gens.e4),
        ("e6", &ring.gens.e6),
        ("chi8", &ring.gens.chi8),
        ("f10", &ring.gens.f10),
        ("f12", &ring.gens.f12),
        ("e8", &ring.e8),
        ("e12", &ring.e12),
        ("psi8", &ring.psi8),
        ("psi12", &ring.psi12),
        ("theta_leech", &ring.theta_leech),
    ];
    for (name, f) in forms {
        store_expansion(&dir.join(format!("{name}.qexp")), f)?;
    }
    let manifest = format!(
        "hermgens {FORMAT_VERSION}\ntrace {}\nkappa {}\nchi8-scale {}/{}\n",
        ring.trace_bound,
        ring.kappa,
        ring.chi8_scale.numer(),
        ring.chi8_scale.denom(),
    );
    fs::write(dir.join("manifest.txt"), manifest)
}

/// Load a cached generator build; None on any mismatch (version, trace,
/// calibration, missing or unreadable files).
pub fn load_ring(root: &Path, trace: i64) -> Option<RingData> {
    let dir = gen_dir(root, trace);
    let manifest = fs::read_to_string(dir.join("manifest.txt")).ok()?;
    let mut kappa = None;
    let mut scale: Option<Rat> = None;
    let mut lines = manifest.lines();
    if lines.next()? != format!("hermgens {FORMAT_VERSION}") {
        return None;
    }
    for line in lines {
        if let Some(v) = line.strip_prefix("trace ") {
            if v.parse::<i64>().ok()? != trace {
                return None;
            }
        } else if let Some(v) = line.strip_prefix("kappa ") {
            kappa = Kappa::parse(v.trim());
        } else if let Some(v) = line.strip_prefix("chi8-scale ") {
            let (n, d) = v.trim().split_once('/')?;
            scale = Some(Rat::new(
                n.parse::<BigInt>().ok()?,
                d.parse::<BigInt>().ok()?,
            ));
        }
    }
    let mut forms = Vec::with_capacity(GEN_FILES.len());
    for name in GEN_FILES {
        let f = load_expansion(&dir.join(format!("{name}.qexp")))?;
        if f.trace_bound != trace {
            return None;
        }
        forms.push(f);
    }
    let mut it = forms.into_iter();
    Some(RingData {
        gens: GeneratorSet {
            e4: it.next()?,
            e6: it.next()?,
            chi8: it.next()?,
            f10: it.next()?,
            f12: it.next()?,
        },
        e8: it.next()?,
        e12: it.next()?,
        psi8: it.next()?,
        psi12: it.next()?,
        theta_leech: it.next()?,
        chi8_scale: scale?,
        kappa: kappa?,
        trace_bound: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded_ring::build_generators;
    use crate::krieg::{krieg_expansion, KriegParams};
    use crate::number_theory::QuadField;

    #[test]
    fn expansion_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let f = krieg_expansion(&KriegParams::new(QuadField::gaussian(), 4), 3);
        let path = dir.path().join(eisenstein_file(-4, 4, 3));
        store_expansion(&path, &f).unwrap();
        let g = load_expansion(&path).unwrap();
        assert!(f.agrees_with(&g, 3));
        assert_eq!(g.weight, 4);
        assert_eq!(g.in_theorem_range, Some(false));
    }

    #[test]
    fn ring_cache_round_trip_and_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let ring = build_generators(3).unwrap();
        store_ring(dir.path(), &ring).unwrap();
        let loaded = load_ring(dir.path(), 3).expect("cache hit");
        assert_eq!(loaded.kappa, ring.kappa);
        assert_eq!(loaded.chi8_scale, ring.chi8_scale);
        assert!(loaded.gens.chi8.agrees_with(&ring.gens.chi8, 3));
        // different trace bound: miss
        assert!(load_ring(dir.path(), 4).is_none());
        // corrupted manifest: miss
        let manifest = dir.path().join("generators_t3_v1/manifest.txt");
        std::fs::write(&manifest, "hermgens 999\n").unwrap();
        assert!(load_ring(dir.path(), 3).is_none());
    }
}
