//! The trivial-ambiguity group, the complement-flip ambiguity,
//! canonicalization of binary signals, and exhaustive uniqueness oracles.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::autocorr::{periodic_autocorrelation_int, regular_autocorrelation_int};
use crate::error::{Error, Result};
use crate::signal::{BinarySignal, ComplexSignal};

/// Default cap on exhaustive enumeration (2^20 candidates).
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// One element of the trivial-ambiguity group: an optional conjugate
/// inversion followed by a cyclic shift and a global phase,
/// `y_k = e^{i phase} xt_{k + shift}` with `xt` either `x` or the conjugate
/// inverse `k -> conj(x_{-k})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrivialAmbiguity {
    pub phase: f64,
    pub shift: usize,
    pub reflect: bool,
}

impl TrivialAmbiguity {
    pub fn identity() -> Self {
        Self { phase: 0.0, shift: 0, reflect: false }
    }

    pub fn shift(shift: usize) -> Self {
        Self { phase: 0.0, shift, reflect: false }
    }

    pub fn reflect() -> Self {
        Self { phase: 0.0, shift: 0, reflect: true }
    }

    /// Group composition for signals of length `n`: applying the result
    /// equals applying `first`, then `self`.
    pub fn compose(&self, first: &TrivialAmbiguity, n: usize) -> TrivialAmbiguity {
        if !self.reflect {
            TrivialAmbiguity {
                phase: (self.phase + first.phase).rem_euclid(TAU),
                shift: (self.shift + first.shift) % n,
                reflect: first.reflect,
            }
        } else {
            TrivialAmbiguity {
                phase: (self.phase - first.phase).rem_euclid(TAU),
                shift: (self.shift + n - first.shift % n) % n,
                reflect: !first.reflect,
            }
        }
    }
}

/// Applies a trivial ambiguity; the result has the same Fourier magnitudes.
pub fn apply_trivial(x: &ComplexSignal, t: &TrivialAmbiguity) -> ComplexSignal {
    let n = x.len();
    let phase = Complex64::from_polar(1.0, t.phase);
    let samples = (0..n)
        .map(|k| {
            let idx = (k + t.shift) % n;
            let base = if t.reflect { x[(n - idx) % n].conj() } else { x[idx] };
            phase * base
        })
        .collect();
    ComplexSignal::new(samples).expect("trivial ambiguity preserves finiteness")
}

/// Shift/reflect action restricted to binary signals.
pub fn apply_trivial_binary(x: &BinarySignal, shift: usize, reflect: bool) -> BinarySignal {
    let n = x.len();
    let bits = (0..n)
        .map(|k| {
            let idx = (k + shift) % n;
            if reflect {
                x.bits()[(n - idx) % n]
            } else {
                x.bits()[idx]
            }
        })
        .collect();
    BinarySignal::new(bits).expect("bits stay binary")
}

/// The complement-flip ambiguity: given `theta`, returns
/// `c = (1 + e^{-i theta}) / N * sum(x)` and `y = c 1 - x`, which satisfies
/// `|F y| = |F x|`.
pub fn complement_ambiguity(x: &ComplexSignal, theta: f64) -> (Complex64, ComplexSignal) {
    let n = x.len();
    let sum: Complex64 = x.samples().iter().sum();
    let c = (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -theta)) / n as f64 * sum;
    let y = ComplexSignal::new(x.samples().iter().map(|&xk| c - xk).collect())
        .expect("finite complement");
    (c, y)
}

// --- mask utilities -------------------------------------------------------
//
// Binary signals of length n <= 64 are packed into u64 masks with bit k
// holding entry k. Lexicographic comparison of bit sequences corresponds to
// integer comparison of the "ki" form, where entry 0 sits at the most
// significant position.

fn low_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Entry `k` of `mask` moves to bit position `n-1-k`.
fn to_ki(mask: u64, n: usize) -> u64 {
    let mut ki = 0u64;
    for k in 0..n {
        if (mask >> k) & 1 == 1 {
            ki |= 1 << (n - 1 - k);
        }
    }
    ki
}

fn ki_to_mask(ki: u64, n: usize) -> u64 {
    to_ki(ki, n) // the transform is an involution
}

/// Left rotation in the n-bit ki space = cyclic shift of the sequence.
fn rot_left(ki: u64, s: usize, n: usize) -> u64 {
    if s == 0 {
        return ki;
    }
    ((ki << s) | (ki >> (n - s))) & low_mask(n)
}

/// Cyclic reflection around index 0: `y_k = x_{(n-k) mod n}`.
fn reflect_mask(mask: u64, n: usize) -> u64 {
    let mut out = 0u64;
    for k in 0..n {
        if (mask >> ((n - k) % n)) & 1 == 1 {
            out |= 1 << k;
        }
    }
    out
}

/// Full index reversal `y_k = x_{n-1-k}` (the oversampled-mode ambiguity).
fn reverse_mask(mask: u64, n: usize) -> u64 {
    to_ki(mask, n)
}

/// Smallest ki value over the shift x reflect orbit; doubles as a class id.
fn canonical_ki(mask: u64, n: usize) -> u64 {
    let ki = to_ki(mask, n);
    let ki_r = to_ki(reflect_mask(mask, n), n);
    let mut best = u64::MAX;
    for s in 0..n {
        best = best.min(rot_left(ki, s, n)).min(rot_left(ki_r, s, n));
    }
    best
}

fn orbit_masks(mask: u64, n: usize) -> Vec<u64> {
    let ki = to_ki(mask, n);
    let ki_r = to_ki(reflect_mask(mask, n), n);
    let mut orbit: Vec<u64> = (0..n)
        .flat_map(|s| [rot_left(ki, s, n), rot_left(ki_r, s, n)])
        .collect();
    orbit.sort_unstable();
    orbit.dedup();
    orbit.into_iter().map(|k| ki_to_mask(k, n)).collect()
}

/// A trivial-ambiguity equivalence class of binary signals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceClass {
    pub representative: BinarySignal,
    pub orbit_size: usize,
}

/// Canonical form of a binary signal: the lexicographically smallest element
/// of its orbit under all cyclic shifts and the reflection.
pub fn canonicalize(x: &BinarySignal) -> EquivalenceClass {
    let n = x.len();
    assert!(n <= 64, "canonicalize supports lengths up to 64");
    let mask = x.to_mask();
    let orbit = orbit_masks(mask, n);
    let canon = ki_to_mask(canonical_ki(mask, n), n);
    EquivalenceClass {
        representative: BinarySignal::from_mask(canon, n),
        orbit_size: orbit.len(),
    }
}

/// The full shift x reflect orbit of a binary signal, sorted.
pub fn trivial_orbit(x: &BinarySignal) -> Vec<BinarySignal> {
    let n = x.len();
    let mut orbit: Vec<BinarySignal> = orbit_masks(x.to_mask(), n)
        .into_iter()
        .map(|m| BinarySignal::from_mask(m, n))
        .collect();
    orbit.sort();
    orbit
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::EnumerationCap { n, cap });
    }
    if n > 32 {
        return Err(Error::EnumerationCap { n, cap: 32 });
    }
    Ok(())
}

fn enumerate_by_key<K: Eq + Send + Sync>(
    x: &BinarySignal,
    cap: usize,
    key_of: impl Fn(&BinarySignal) -> K + Sync,
) -> Result<Vec<BinarySignal>> {
    let n = x.len();
    check_cap(n, cap)?;
    let s = x.support_count() as u32;
    let target = key_of(x);
    let mut matches: Vec<BinarySignal> = (0u64..(1u64 << n))
        .into_par_iter()
        .filter(|m| m.count_ones() == s)
        .map(|m| BinarySignal::from_mask(m, n))
        .filter(|y| key_of(y) == target)
        .collect();
    matches.sort();
    Ok(matches)
}

/// All binary `y` with the same integer periodic autocorrelation as `x`
/// (equivalently the same classic Fourier magnitudes), by brute force.
pub fn enumerate_matching(x: &BinarySignal, cap: usize) -> Result<Vec<BinarySignal>> {
    enumerate_by_key(x, cap, periodic_autocorrelation_int)
}

/// All binary `y` with the same integer regular autocorrelation as `x`
/// (equivalently the same oversampled magnitudes with `M >= 2N-1`).
pub fn enumerate_matching_regular(x: &BinarySignal, cap: usize) -> Result<Vec<BinarySignal>> {
    enumerate_by_key(x, cap, regular_autocorrelation_int)
}

/// Which equivalence relation a uniqueness scan works under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AmbiguityMode {
    /// Classic measurements: shifts + reflection, plus the complement flip
    /// when the support is exactly N/2.
    Classic,
    /// Oversampled (`M >= 2N-1`) measurements: index reversal only.
    Oversampled,
}

impl std::fmt::Display for AmbiguityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AmbiguityMode::Classic => write!(f, "classic"),
            AmbiguityMode::Oversampled => write!(f, "oversampled"),
        }
    }
}

/// Per-support aggregate of the uniqueness scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessRow {
    pub support: usize,
    pub num_classes: usize,
    pub num_unique_classes: usize,
    /// Canonical bits of one non-unique class, if any (lexicographically
    /// smallest).
    pub example_nonunique: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub n: usize,
    pub mode: AmbiguityMode,
    pub rows: Vec<UniquenessRow>,
}

impl UniquenessReport {
    pub fn row(&self, support: usize) -> &UniquenessRow {
        &self.rows[support]
    }
}

/// Packs an integer autocorrelation key into a u128 (6 bits per lag).
fn pack_key(counts: &[u32]) -> u128 {
    debug_assert!(counts.len() <= 21);
    counts
        .iter()
        .fold(0u128, |acc, &c| (acc << 6) | (c as u128 & 0x3f))
}

/// Scans every binary signal of length `n` and reports, per support count,
/// how many equivalence classes are uniquely recoverable from the magnitude
/// data of the given mode.
pub fn uniqueness_report(n: usize, mode: AmbiguityMode, cap: usize) -> Result<UniquenessReport> {
    check_cap(n, cap)?;
    if n > 20 {
        // key packing above and the 2^n scan both assume a small n
        return Err(Error::EnumerationCap { n, cap: 20 });
    }

    // (autocorrelation key, class id, mask) for every signal
    let mut entries: Vec<(u128, u64, u64)> = (0u64..(1u64 << n))
        .into_par_iter()
        .map(|mask| {
            let x = BinarySignal::from_mask(mask, n);
            let (key, class) = match mode {
                AmbiguityMode::Classic => {
                    let counts = periodic_autocorrelation_int(&x);
                    (pack_key(&counts[..=n / 2]), canonical_ki(mask, n))
                }
                AmbiguityMode::Oversampled => {
                    let counts = regular_autocorrelation_int(&x);
                    let rev = reverse_mask(mask, n);
                    (pack_key(&counts), to_ki(mask, n).min(to_ki(rev, n)))
                }
            };
            (key, class, mask)
        })
        .collect();
    entries.par_sort_unstable();

    // classes sharing a key: unique iff the key determines the class up to
    // the admitted ambiguities
    let mut rows: Vec<UniquenessRow> = (0..=n)
        .map(|s| UniquenessRow {
            support: s,
            num_classes: 0,
            num_unique_classes: 0,
            example_nonunique: None,
        })
        .collect();

    let mut start = 0;
    while start < entries.len() {
        let key = entries[start].0;
        let mut end = start;
        while end < entries.len() && entries[end].0 == key {
            end += 1;
        }
        let group = &entries[start..end];
        let support = group[0].2.count_ones() as usize;

        let mut classes: Vec<u64> = group.iter().map(|&(_, c, _)| c).collect();
        classes.sort_unstable();
        classes.dedup();

        for &class in &classes {
            let allowed = match mode {
                AmbiguityMode::Classic => {
                    let mask = ki_to_mask(class, n);
                    let mut ok = vec![class];
                    if 2 * support == n {
                        ok.push(canonical_ki(mask ^ low_mask(n), n));
                    }
                    ok
                }
                AmbiguityMode::Oversampled => vec![class],
            };
            let unique = classes.iter().all(|c| allowed.contains(c));
            let row = &mut rows[support];
            row.num_classes += 1;
            if unique {
                row.num_unique_classes += 1;
            } else {
                let bits = BinarySignal::from_mask(ki_to_mask(class, n), n).bits().to_vec();
                let slot = &mut row.example_nonunique;
                if slot.as_ref().is_none_or(|cur| bits < *cur) {
                    *slot = Some(bits);
                }
            }
        }
        start = end;
    }

    Ok(UniquenessReport { n, mode, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::{magnitude, DftPlan};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn remark_pair() -> (BinarySignal, BinarySignal) {
        (
            BinarySignal::new(vec![0, 0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 1]).unwrap(),
            BinarySignal::new(vec![0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 1, 1]).unwrap(),
        )
    }

    fn random_complex(n: usize, rng: &mut impl Rng) -> ComplexSignal {
        ComplexSignal::new(
            (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_ambiguity_is_identity() {
        let x = ComplexSignal::from_real(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(apply_trivial(&x, &TrivialAmbiguity::identity()), x);
    }

    #[test]
    fn shift_moves_delta() {
        let n = 7;
        for k0 in 0..n {
            let y = apply_trivial(&ComplexSignal::delta(0, n), &TrivialAmbiguity::shift(k0));
            let expect = ComplexSignal::delta((n - k0) % n, n);
            assert_eq!(y, expect);
        }
    }

    #[test]
    fn reflect_binary_example() {
        let x = BinarySignal::new(vec![1, 1, 0, 0]).unwrap();
        let y = apply_trivial_binary(&x, 0, true);
        assert_eq!(y.bits(), &[1, 0, 0, 1]);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 9;
        let x = random_complex(n, &mut rng);
        for _ in 0..50 {
            let t1 = TrivialAmbiguity {
                phase: rng.gen_range(0.0..TAU),
                shift: rng.gen_range(0..n),
                reflect: rng.gen_bool(0.5),
            };
            let t2 = TrivialAmbiguity {
                phase: rng.gen_range(0.0..TAU),
                shift: rng.gen_range(0..n),
                reflect: rng.gen_bool(0.5),
            };
            let sequential = apply_trivial(&apply_trivial(&x, &t1), &t2);
            let composed = apply_trivial(&x, &t2.compose(&t1, n));
            for k in 0..n {
                assert!((sequential[k] - composed[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn trivial_ambiguities_preserve_magnitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let n = rng.gen_range(2..=64);
            let x = random_complex(n, &mut rng);
            let t = TrivialAmbiguity {
                phase: rng.gen_range(0.0..TAU),
                shift: rng.gen_range(0..n),
                reflect: rng.gen_bool(0.5),
            };
            let y = apply_trivial(&x, &t);
            let plan = DftPlan::classic(n).unwrap();
            let bx = magnitude(&plan, &x).unwrap();
            let by = magnitude(&plan, &y).unwrap();
            for (a, b) in bx.values().iter().zip(by.values()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn complement_flip_on_half_support() {
        let x = BinarySignal::new(vec![1, 1, 1, 1, 0, 0, 1, 0, 0, 0]).unwrap();
        let (c, y) = complement_ambiguity(&x.to_complex(), 0.0);
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        for (got, want) in y.samples().iter().zip(x.flip().to_complex().samples()) {
            assert!((got - want).norm() < 1e-12);
        }
    }

    #[test]
    fn complement_of_zero_is_zero() {
        let (c, y) = complement_ambiguity(&ComplexSignal::zeros(5), 1.3);
        assert_eq!(c, Complex64::new(0.0, 0.0));
        assert_eq!(y, ComplexSignal::zeros(5));
    }

    #[test]
    fn complement_preserves_magnitudes() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let n = 11;
        let x = random_complex(n, &mut rng);
        let (_, y) = complement_ambiguity(&x, std::f64::consts::PI / 3.0);
        let plan = DftPlan::classic(n).unwrap();
        let bx = magnitude(&plan, &x).unwrap();
        let by = magnitude(&plan, &y).unwrap();
        for (a, b) in bx.values().iter().zip(by.values()) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn complement_necessity_direction() {
        // solve for theta from the lag-0 equation and check the c formula
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let n = 8;
        let x = random_complex(n, &mut rng);
        let theta = rng.gen_range(0.0..TAU);
        let (c, y) = complement_ambiguity(&x, theta);
        let plan = DftPlan::classic(n).unwrap();
        let fx0 = plan.forward(&x).unwrap()[0];
        let fy0 = plan.forward(&y).unwrap()[0];
        // (Fx)_0 = e^{i theta'} (Fy)_0 for the recovered theta'
        let ratio = fx0 / fy0;
        assert!((ratio.norm() - 1.0).abs() < 1e-10);
        let theta_rec = ratio.arg().rem_euclid(TAU);
        let sum: Complex64 = x.samples().iter().sum();
        let c_rec =
            (Complex64::new(1.0, 0.0) + Complex64::from_polar(1.0, -theta_rec)) / n as f64 * sum;
        assert!((c_rec - c).norm() < 1e-10);
    }

    #[test]
    fn canonical_form_is_lex_smallest_orbit_element() {
        let x = BinarySignal::new(vec![0, 1, 0, 0]).unwrap();
        let class = canonicalize(&x);
        assert_eq!(class.representative.bits(), &[0, 0, 0, 1]);
        assert_eq!(class.orbit_size, 4);

        let a = BinarySignal::new(vec![1, 1, 0, 0]).unwrap();
        let b = BinarySignal::new(vec![0, 0, 1, 1]).unwrap();
        assert_eq!(canonicalize(&a), canonicalize(&b));
    }

    #[test]
    fn canonical_is_invariant_over_the_orbit() {
        let x = BinarySignal::new(vec![1, 0, 1, 1, 0, 0, 0, 1]).unwrap();
        let class = canonicalize(&x);
        for y in trivial_orbit(&x) {
            assert_eq!(canonicalize(&y), class);
            assert!(class.representative <= y);
        }
    }

    #[test]
    fn remark_pair_same_autocorrelation_different_classes() {
        let (x, y) = remark_pair();
        assert_eq!(periodic_autocorrelation_int(&x), periodic_autocorrelation_int(&y));
        assert_ne!(canonicalize(&x), canonicalize(&y));
    }

    #[test]
    fn flip_pair_is_not_trivially_related() {
        let x = BinarySignal::new(vec![1, 1, 1, 1, 0, 0, 1, 0, 0, 0]).unwrap();
        assert_ne!(canonicalize(&x), canonicalize(&x.flip()));
    }

    #[test]
    fn enumerate_matching_delta_gives_all_shifts() {
        let x = BinarySignal::from_mask(1, 8);
        let matches = enumerate_matching(&x, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(matches.len(), 8);
        for m in &matches {
            assert_eq!(m.support_count(), 1);
        }
    }

    #[test]
    fn enumerate_matching_support_two_is_trivial_orbit() {
        let x = BinarySignal::new(vec![1, 0, 0, 1, 0, 0, 0, 0, 0, 0]).unwrap();
        let matches = enumerate_matching(&x, DEFAULT_ENUMERATION_CAP).unwrap();
        assert_eq!(matches, trivial_orbit(&x));
    }

    #[test]
    fn enumeration_contains_the_trivial_orbit() {
        let x = BinarySignal::new(vec![1, 1, 0, 1, 0, 0, 1, 0, 0]).unwrap();
        let matches = enumerate_matching(&x, DEFAULT_ENUMERATION_CAP).unwrap();
        for y in trivial_orbit(&x) {
            assert!(matches.contains(&y));
        }
    }

    #[test]
    fn remark_pair_found_by_enumeration() {
        let (x, y) = remark_pair();
        let matches = enumerate_matching(&x, DEFAULT_ENUMERATION_CAP).unwrap();
        assert!(matches.contains(&y));
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let x = BinarySignal::zeros(24);
        assert!(matches!(
            enumerate_matching(&x, 20),
            Err(Error::EnumerationCap { n: 24, cap: 20 })
        ));
    }

    #[test]
    fn flip_preserves_matched_autocorrelations() {
        // matched pairs stay matched after complementing both
        let (x, y) = remark_pair();
        assert_eq!(
            periodic_autocorrelation_int(&x.flip()),
            periodic_autocorrelation_int(&y.flip())
        );
    }

    #[test]
    fn uniqueness_small_supports_all_unique() {
        let report = uniqueness_report(10, AmbiguityMode::Classic, 20).unwrap();
        for s in [0usize, 1, 2, 3, 7, 8, 9, 10] {
            let row = report.row(s);
            assert_eq!(
                row.num_classes, row.num_unique_classes,
                "support {s}: {row:?}"
            );
            assert!(row.example_nonunique.is_none());
        }
    }

    #[test]
    fn uniqueness_fails_at_support_four_n_twelve() {
        let report = uniqueness_report(12, AmbiguityMode::Classic, 20).unwrap();
        let row = report.row(4);
        assert!(row.num_unique_classes < row.num_classes);
        assert!(row.example_nonunique.is_some());
    }

    #[test]
    fn oversampled_mode_palindromic_signals_are_unique() {
        // Palindromes x_n = x_{N-1-n} with nonzero endpoints match only
        // themselves. The endpoint condition matters: it is what makes the
        // Z-transform reciprocal, and the brute force below confirms that
        // zero-padded palindromes pick up translation ambiguities.
        for n in [6usize, 9, 12] {
            for mask in 0u64..(1 << n.div_ceil(2)) {
                // build a palindrome from the half-mask
                let mut bits = vec![0u8; n];
                for k in 0..n.div_ceil(2) {
                    let b = ((mask >> k) & 1) as u8;
                    bits[k] = b;
                    bits[n - 1 - k] = b;
                }
                if bits[0] == 0 {
                    continue;
                }
                let x = BinarySignal::new(bits).unwrap();
                let matches = enumerate_matching_regular(&x, 20).unwrap();
                assert_eq!(matches.len(), 1, "palindrome not unique: {x:?}");
                assert_eq!(matches[0], x);
            }
        }
    }

    #[test]
    fn zero_padded_palindromes_have_translation_ambiguities() {
        let x = BinarySignal::new(vec![0, 1, 0, 0, 1, 0]).unwrap();
        let matches = enumerate_matching_regular(&x, 20).unwrap();
        let translate = BinarySignal::new(vec![1, 0, 0, 1, 0, 0]).unwrap();
        assert!(matches.contains(&translate));
        assert_eq!(matches.len(), 3);
    }

    #[test]
    fn oversampled_mode_report_counts_reversal_classes() {
        let report = uniqueness_report(8, AmbiguityMode::Oversampled, 20).unwrap();
        // support 1: the 8 deltas form 4 reversal classes, none unique
        // (any two deltas share the regular autocorrelation spike)
        let row = report.row(1);
        assert_eq!(row.num_classes, 4);
        assert_eq!(row.num_unique_classes, 0);
    }
}
