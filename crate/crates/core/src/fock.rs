//! The two-mode Fock lattice: occupations, SU(1,1) irrep labels, pure states
//! and measured photon-number distributions.
//!
//! An occupation `|n_a, n_b⟩` of the two modes sits in the positive discrete
//! series irrep with Bargmann index `k = (|n_a − n_b| + 1)/2` at weight
//! `μ = (n_a + n_b + 1)/2`. That map forgets which mode carries the excess
//! photons, so [`IrrepIndex`] also records the [`Branch`] to stay invertible.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ|ψ|² − 1` accepted as "normalized".
pub const NORM_TOLERANCE: f64 = 1e-8;

/// A half-integer stored as its double, so arithmetic on `k` and `μ` is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_doubled(twice: i64) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// `self − other` when the difference is an integer.
    pub fn int_diff(self, other: HalfInt) -> Option<i64> {
        let d = self.0 - other.0;
        (d % 2 == 0).then_some(d / 2)
    }

    pub fn add_int(self, n: i64) -> HalfInt {
        HalfInt(self.0 + 2 * n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Photon numbers in modes `a` and `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeOccupation {
    pub n_a: usize,
    pub n_b: usize,
}

impl ModeOccupation {
    pub const fn new(n_a: usize, n_b: usize) -> Self {
        Self { n_a, n_b }
    }

    /// Photon-number difference `n_a − n_b`, conserved by the squeezer.
    pub fn difference(self) -> i64 {
        self.n_a as i64 - self.n_b as i64
    }

    /// Position along the fixed-difference diagonal, `min(n_a, n_b)`.
    pub fn pair_level(self) -> usize {
        self.n_a.min(self.n_b)
    }

    /// The occupation at level `m` of the diagonal with difference `d`.
    pub fn on_diagonal(d: i64, m: usize) -> Self {
        if d >= 0 {
            Self::new(m + d as usize, m)
        } else {
            Self::new(m, m + d.unsigned_abs() as usize)
        }
    }
}

/// Sign of `n_a − n_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
    Zero,
}

/// Irrep label `(k, μ)` of a two-mode Fock state plus the branch needed to
/// recover the occupation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IrrepIndex {
    k: HalfInt,
    mu: HalfInt,
    branch: Branch,
}

impl IrrepIndex {
    pub fn new(k: HalfInt, mu: HalfInt, branch: Branch) -> Result<Self> {
        if k.doubled() < 1 {
            return Err(Error::InvalidIrrep(format!("k = {k} must be positive")));
        }
        match mu.int_diff(k) {
            Some(level) if level >= 0 => {}
            Some(_) => return Err(Error::InvalidIrrep(format!("μ = {mu} is below k = {k}"))),
            None => {
                return Err(Error::InvalidIrrep(format!(
                    "μ − k = {mu} − {k} is not an integer"
                )))
            }
        }
        let half = k == HalfInt::HALF;
        if half != (branch == Branch::Zero) {
            return Err(Error::InvalidIrrep(format!(
                "branch {branch:?} inconsistent with k = {k}"
            )));
        }
        Ok(Self { k, mu, branch })
    }

    pub fn k(&self) -> HalfInt {
        self.k
    }

    pub fn mu(&self) -> HalfInt {
        self.mu
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// `μ − k`, the number of photon pairs above the lowest weight.
    pub fn level(&self) -> usize {
        self.mu.int_diff(self.k).expect("validated on construction") as usize
    }
}

pub fn irrep_of(occ: ModeOccupation) -> IrrepIndex {
    let d = occ.difference();
    let branch = match d.signum() {
        1 => Branch::Plus,
        -1 => Branch::Minus,
        _ => Branch::Zero,
    };
    IrrepIndex {
        k: HalfInt::from_doubled(d.abs() + 1),
        mu: HalfInt::from_doubled((occ.n_a + occ.n_b) as i64 + 1),
        branch,
    }
}

pub fn occupation_of(idx: &IrrepIndex) -> ModeOccupation {
    let diff = idx.k.doubled() - 1;
    let d = match idx.branch {
        Branch::Minus => -diff,
        _ => diff,
    };
    ModeOccupation::on_diagonal(d, idx.level())
}

/// Validates raw labels and inverts them in one step.
pub fn occupation_from_labels(k: HalfInt, mu: HalfInt, branch: Branch) -> Result<ModeOccupation> {
    Ok(occupation_of(&IrrepIndex::new(k, mu, branch)?))
}

/// SU(1,1) parity `(−1)^{μ−k}` of a Fock state, i.e. `(−1)^{min(n_a, n_b)}`.
pub fn parity_sign(occ: ModeOccupation) -> i32 {
    if occ.pair_level() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The same sign computed from the irrep label.
pub fn parity_sign_from_irrep(idx: &IrrepIndex) -> i32 {
    if idx.level() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Pure two-mode state on the square lattice `0 ≤ n_a, n_b ≤ n_max`.
///
/// Amplitudes are stored per diagonal `n_a − n_b = d`, and only diagonals
/// that were written are kept. Squeezing never mixes diagonals, so a squeezed
/// state stays as sparse as its input however far the lattice grows.
#[derive(Debug, Clone)]
pub struct TwoModeState {
    n_max: usize,
    diagonals: BTreeMap<i64, Vec<Complex64>>,
}

impl PartialEq for TwoModeState {
    fn eq(&self, other: &Self) -> bool {
        self.n_max == other.n_max && self.max_abs_diff(other) == 0.0
    }
}

impl TwoModeState {
    pub fn zeros(n_max: usize) -> Self {
        Self {
            n_max,
            diagonals: BTreeMap::new(),
        }
    }

    pub fn fock(n_a: usize, n_b: usize, n_max: usize) -> Result<Self> {
        let mut s = Self::zeros(n_max);
        s.set(ModeOccupation::new(n_a, n_b), Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn vacuum() -> Self {
        Self::fock(0, 0, 0).expect("in range")
    }

    /// Builds a state from `(occupation, amplitude)` pairs; repeated entries add.
    pub fn from_entries<I>(n_max: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ModeOccupation, Complex64)>,
    {
        let mut s = Self::zeros(n_max);
        for (occ, amp) in entries {
            s.check(occ)?;
            if amp != Complex64::default() {
                *s.slot(occ) += amp;
            }
        }
        Ok(s)
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn check(&self, occ: ModeOccupation) -> Result<()> {
        if occ.n_a > self.n_max || occ.n_b > self.n_max {
            return Err(Error::InvalidParameter(format!(
                "occupation ({}, {}) outside truncation n_max = {}",
                occ.n_a, occ.n_b, self.n_max
            )));
        }
        Ok(())
    }

    fn slot(&mut self, occ: ModeOccupation) -> &mut Complex64 {
        let d = occ.difference();
        let len = self.diagonal_len(d);
        let diag = self
            .diagonals
            .entry(d)
            .or_insert_with(|| vec![Complex64::default(); len]);
        &mut diag[occ.pair_level()]
    }

    /// Amplitude at `occ`; zero outside the lattice.
    pub fn amplitude(&self, occ: ModeOccupation) -> Complex64 {
        if occ.n_a > self.n_max || occ.n_b > self.n_max {
            return Complex64::default();
        }
        self.diagonals
            .get(&occ.difference())
            .map(|diag| diag[occ.pair_level()])
            .unwrap_or_default()
    }

    pub fn set(&mut self, occ: ModeOccupation, amp: Complex64) -> Result<()> {
        self.check(occ)?;
        if amp != Complex64::default() || self.diagonals.contains_key(&occ.difference()) {
            *self.slot(occ) = amp;
        }
        Ok(())
    }

    /// Iterates `(occupation, amplitude)` over the stored diagonals, in
    /// ascending `n_a − n_b` and then ascending `min(n_a, n_b)`. Every
    /// occupation not visited has amplitude zero.
    pub fn iter(&self) -> impl Iterator<Item = (ModeOccupation, Complex64)> + '_ {
        self.diagonals.iter().flat_map(|(&d, diag)| {
            diag.iter()
                .enumerate()
                .map(move |(m, &a)| (ModeOccupation::on_diagonal(d, m), a))
        })
    }

    pub fn norm_sq(&self) -> f64 {
        self.iter().map(|(_, a)| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroState);
        }
        let mut out = self.clone();
        for diag in out.diagonals.values_mut() {
            diag.iter_mut().for_each(|a| *a /= n);
        }
        Ok(out)
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// Largest `max(n_a, n_b)` carrying a nonzero amplitude.
    pub fn support_max(&self) -> usize {
        self.iter()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(o, _)| o.n_a.max(o.n_b))
            .max()
            .unwrap_or(0)
    }

    /// Photon-number differences present in the state, ascending.
    pub fn differences(&self) -> Vec<i64> {
        self.diagonals
            .iter()
            .filter(|(_, diag)| diag.iter().any(|a| a.norm_sqr() > 0.0))
            .map(|(&d, _)| d)
            .collect()
    }

    /// Amplitudes along the diagonal `n_a − n_b = d`, indexed by `min(n_a, n_b)`.
    pub fn diagonal(&self, d: i64) -> Vec<Complex64> {
        self.diagonals
            .get(&d)
            .cloned()
            .unwrap_or_else(|| vec![Complex64::default(); self.diagonal_len(d)])
    }

    pub(crate) fn diagonal_len(&self, d: i64) -> usize {
        (self.n_max + 1).saturating_sub(d.unsigned_abs() as usize)
    }

    pub(crate) fn set_diagonal(&mut self, d: i64, values: &[Complex64]) {
        let len = self.diagonal_len(d);
        if len == 0 {
            return;
        }
        let mut diag = values[..values.len().min(len)].to_vec();
        diag.resize(len, Complex64::default());
        self.diagonals.insert(d, diag);
    }

    /// Copy onto a different truncation; entries beyond it are dropped.
    pub fn resized(&self, n_max: usize) -> Self {
        let mut out = Self::zeros(n_max);
        for (&d, diag) in &self.diagonals {
            out.set_diagonal(d, diag);
        }
        out
    }

    /// `⟨self|other⟩` over the common lattice.
    pub fn inner(&self, other: &TwoModeState) -> Complex64 {
        self.iter()
            .map(|(o, a)| a.conj() * other.amplitude(o))
            .sum()
    }

    /// Largest entry-wise difference, treating missing entries as zero.
    pub fn max_abs_diff(&self, other: &TwoModeState) -> f64 {
        let one_way = |x: &TwoModeState, y: &TwoModeState| {
            x.iter()
                .map(|(o, a)| (a - y.amplitude(o)).norm())
                .fold(0.0, f64::max)
        };
        one_way(self, other).max(one_way(other, self))
    }

    pub fn to_json(&self) -> String {
        let file = StateFile {
            n_max: self.n_max,
            amplitudes: self
                .sorted_entries()
                .into_iter()
                .map(|(o, a)| StateEntry {
                    na: o.n_a,
                    nb: o.n_b,
                    re: a.re,
                    im: a.im,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    /// Nonzero entries in row-major `(n_a, n_b)` order.
    fn sorted_entries(&self) -> Vec<(ModeOccupation, Complex64)> {
        let mut v: Vec<_> = self
            .iter()
            .filter(|(_, a)| *a != Complex64::default())
            .collect();
        v.sort_by_key(|(o, _)| (o.n_a, o.n_b));
        v
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile =
            serde_json::from_str(text).map_err(|e| Error::StateFile(e.to_string()))?;
        let mut s = Self::zeros(file.n_max);
        let mut seen = std::collections::HashSet::new();
        for e in file.amplitudes {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(Error::StateFile(format!(
                    "non-finite amplitude at ({}, {})",
                    e.na, e.nb
                )));
            }
            if !seen.insert((e.na, e.nb)) {
                return Err(Error::StateFile(format!(
                    "duplicate entry ({}, {})",
                    e.na, e.nb
                )));
            }
            s.set(ModeOccupation::new(e.na, e.nb), Complex64::new(e.re, e.im))
                .map_err(|err| Error::StateFile(err.to_string()))?;
        }
        Ok(s)
    }

    pub fn read(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    n_max: usize,
    amplitudes: Vec<StateEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateEntry {
    na: usize,
    nb: usize,
    re: f64,
    im: f64,
}

/// Joint photon-number probabilities plus the mass that fell outside the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPhotonDistribution {
    n_max: usize,
    probabilities: Vec<f64>,
    discarded_mass: f64,
}

impl JointPhotonDistribution {
    pub const MASS_TOLERANCE: f64 = 1e-10;

    pub fn new(n_max: usize, probabilities: Vec<f64>, discarded_mass: f64) -> Result<Self> {
        if probabilities.len() != (n_max + 1) * (n_max + 1) {
            return Err(Error::InvalidDistribution(format!(
                "expected {} entries, got {}",
                (n_max + 1) * (n_max + 1),
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities
            .iter()
            .find(|p| !(**p >= 0.0) || !p.is_finite())
        {
            return Err(Error::InvalidDistribution(format!(
                "entry {p} is not a probability"
            )));
        }
        if !(0.0..=1.0).contains(&discarded_mass) {
            return Err(Error::InvalidDistribution(format!(
                "discarded mass {discarded_mass} outside [0, 1]"
            )));
        }
        let d = Self::from_parts(n_max, probabilities, discarded_mass);
        let total = d.total_mass();
        if (total - 1.0).abs() > Self::MASS_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total} ≠ 1"
            )));
        }
        Ok(d)
    }

    /// Point mass at `occ`.
    pub fn point(occ: ModeOccupation, n_max: usize) -> Result<Self> {
        if occ.n_a > n_max || occ.n_b > n_max {
            return Err(Error::InvalidParameter(format!(
                "point ({}, {}) outside n_max = {n_max}",
                occ.n_a, occ.n_b
            )));
        }
        let mut p = vec![0.0; (n_max + 1) * (n_max + 1)];
        p[occ.n_a * (n_max + 1) + occ.n_b] = 1.0;
        Ok(Self::from_parts(n_max, p, 0.0))
    }

    pub(crate) fn from_parts(n_max: usize, probabilities: Vec<f64>, discarded_mass: f64) -> Self {
        Self {
            n_max,
            probabilities,
            discarded_mass,
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn discarded_mass(&self) -> f64 {
        self.discarded_mass
    }

    pub fn get(&self, n_a: usize, n_b: usize) -> f64 {
        if n_a > self.n_max || n_b > self.n_max {
            return 0.0;
        }
        self.probabilities[n_a * (self.n_max + 1) + n_b]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeOccupation, f64)> + '_ {
        let w = self.n_max + 1;
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (ModeOccupation::new(i / w, i % w), p))
    }

    /// Mass on the grid, excluding the discarded part.
    pub fn grid_mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.grid_mass() + self.discarded_mass
    }

    /// `P(n, n)` for `n = 0..=n_max`.
    pub fn pair_diagonal(&self) -> Vec<f64> {
        (0..=self.n_max).map(|n| self.get(n, n)).collect()
    }

    pub fn total_variation(&self, other: &JointPhotonDistribution) -> f64 {
        let n = self.n_max.max(other.n_max);
        let mut tv = (self.discarded_mass - other.discarded_mass).abs();
        for a in 0..=n {
            for b in 0..=n {
                tv += (self.get(a, b) - other.get(a, b)).abs();
            }
        }
        0.5 * tv
    }

    /// Histogram CSV with columns `na,nb,count_or_prob`; zero rows are skipped.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("na,nb,count_or_prob\n");
        for (o, p) in self.iter().filter(|(_, p)| *p != 0.0) {
            out.push_str(&format!("{},{},{}\n", o.n_a, o.n_b, crate::Num(p)));
        }
        out
    }
}

/// `|ψ(n_a, n_b)|²` over the state's lattice.
pub fn photon_distribution(state: &TwoModeState) -> Result<JointPhotonDistribution> {
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sq });
    }
    let w = state.n_max + 1;
    let mut probs = vec![0.0; w * w];
    for (o, a) in state.iter() {
        probs[o.n_a * w + o.n_b] = a.norm_sqr();
    }
    Ok(JointPhotonDistribution::from_parts(state.n_max, probs, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn irrep_labels_of_known_occupations() {
        let v = irrep_of(ModeOccupation::new(0, 0));
        assert_eq!(
            (v.k(), v.mu(), v.branch()),
            (HalfInt::HALF, HalfInt::HALF, Branch::Zero)
        );

        let x = irrep_of(ModeOccupation::new(3, 5));
        assert_eq!(x.k(), HalfInt::from_doubled(3));
        assert_eq!(x.mu(), HalfInt::from_doubled(9));
        assert_eq!(x.branch(), Branch::Minus);

        for n in 0..20 {
            let d = irrep_of(ModeOccupation::new(n, n));
            assert_eq!(d.k(), HalfInt::HALF);
            assert_eq!(d.mu(), HalfInt::from_doubled(2 * n as i64 + 1));
        }
    }

    #[test]
    fn occupation_from_irrep_labels() {
        let h = HalfInt::from_doubled;
        assert_eq!(
            occupation_from_labels(h(1), h(1), Branch::Zero).unwrap(),
            ModeOccupation::new(0, 0)
        );
        assert_eq!(
            occupation_from_labels(h(3), h(9), Branch::Minus).unwrap(),
            ModeOccupation::new(3, 5)
        );
        assert_eq!(
            occupation_from_labels(h(2), h(2), Branch::Plus).unwrap(),
            ModeOccupation::new(1, 0)
        );
    }

    #[test]
    fn invalid_irrep_labels_are_rejected() {
        let h = HalfInt::from_doubled;
        assert!(IrrepIndex::new(h(3), h(1), Branch::Plus).is_err());
        assert!(IrrepIndex::new(h(3), h(4), Branch::Plus).is_err());
        assert!(IrrepIndex::new(h(0), h(2), Branch::Zero).is_err());
        assert!(IrrepIndex::new(h(1), h(3), Branch::Plus).is_err());
        assert!(IrrepIndex::new(h(2), h(2), Branch::Zero).is_err());
    }

    #[test]
    fn parity_signs() {
        assert_eq!(parity_sign(ModeOccupation::new(0, 0)), 1);
        assert_eq!(parity_sign(ModeOccupation::new(1, 1)), -1);
        assert_eq!(parity_sign(ModeOccupation::new(3, 5)), -1);
        assert_eq!(parity_sign(ModeOccupation::new(7, 2)), 1);
    }

    #[test]
    fn norm_and_normalize() {
        assert!(TwoModeState::zeros(3).normalize().is_err());
        assert_eq!(TwoModeState::vacuum().norm(), 1.0);
        let s = TwoModeState::from_entries(2, [(ModeOccupation::new(1, 1), c(2.0))]).unwrap();
        assert_eq!(s.norm(), 2.0);
        let n = s.normalize().unwrap();
        assert_eq!(n, TwoModeState::fock(1, 1, 2).unwrap());
    }

    #[test]
    fn distributions_of_simple_states() {
        let p = photon_distribution(&TwoModeState::fock(1, 1, 3).unwrap()).unwrap();
        assert_eq!(p.get(1, 1), 1.0);
        assert_eq!(p.grid_mass(), 1.0);

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = TwoModeState::from_entries(
            1,
            [
                (ModeOccupation::new(0, 0), c(h)),
                (ModeOccupation::new(1, 1), c(h)),
            ],
        )
        .unwrap();
        let p = photon_distribution(&s).unwrap();
        assert!((p.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((p.get(1, 1) - 0.5).abs() < 1e-15);
        assert_eq!(p.discarded_mass(), 0.0);
    }

    #[test]
    fn unnormalized_state_has_no_distribution() {
        let s = TwoModeState::from_entries(1, [(ModeOccupation::new(0, 0), c(2.0))]).unwrap();
        assert!(matches!(
            photon_distribution(&s),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn state_file_round_trip_and_errors() {
        let s = TwoModeState::from_entries(
            4,
            [
                (ModeOccupation::new(0, 0), Complex64::new(0.6, 0.0)),
                (ModeOccupation::new(3, 1), Complex64::new(0.0, -0.8)),
            ],
        )
        .unwrap();
        assert_eq!(TwoModeState::from_json(&s.to_json()).unwrap(), s);

        assert!(TwoModeState::from_json("{\"n_max\": 1}").is_err());
        assert!(TwoModeState::from_json(
            "{\"n_max\": 1, \"amplitudes\": [{\"na\": 2, \"nb\": 0, \"re\": 1, \"im\": 0}]}"
        )
        .is_err());
        assert!(TwoModeState::from_json("not json").is_err());
    }

    #[test]
    fn distribution_validation() {
        assert!(JointPhotonDistribution::new(0, vec![1.0], 0.0).is_ok());
        assert!(JointPhotonDistribution::new(0, vec![0.5], 0.0).is_err());
        assert!(JointPhotonDistribution::new(0, vec![0.5], 0.5).is_ok());
        assert!(JointPhotonDistribution::new(1, vec![1.0], 0.0).is_err());
        assert!(JointPhotonDistribution::new(0, vec![-0.1], 1.1).is_err());
    }
}
