//! The long-range ring: `N` nodes on a cycle, every pair at minimal ring
//! distance `R <= r_max` coupled with strength `R^-gamma`.
//!
//! The Hamiltonian is the negated transfer matrix of the classical walk,
//! `H = -T`, so it is a weighted graph Laplacian: nonpositive off-diagonal
//! entries and zero row sums. On an even ring the antipodal distance
//! `N/2` reaches a single site, and that pair is coupled once.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decay exponent of the couplings.
///
/// `Infinite` is the nearest-neighbour limit; it is kept distinct so the
/// limit is exact rather than an overflowing power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    Finite(f64),
    Infinite,
}

impl Gamma {
    pub fn is_infinite(self) -> bool {
        matches!(self, Gamma::Infinite)
    }

    /// The finite value, or `f64::INFINITY`.
    pub fn value(self) -> f64 {
        match self {
            Gamma::Finite(g) => g,
            Gamma::Infinite => f64::INFINITY,
        }
    }

    /// `R^-gamma`; the nearest-neighbour limit gives 1 at `R = 1` and 0 beyond.
    pub fn coupling(self, r: usize) -> f64 {
        match self {
            Gamma::Finite(g) => (r as f64).powf(-g),
            Gamma::Infinite => {
                if r == 1 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn validate(self) -> Result<()> {
        match self {
            Gamma::Infinite => Ok(()),
            Gamma::Finite(g) if g.is_nan() => Err(Error::InvalidSpec("gamma is NaN".into())),
            Gamma::Finite(g) if g.is_infinite() => Err(Error::InvalidSpec(
                "use Gamma::Infinite for the nearest-neighbour limit".into(),
            )),
            Gamma::Finite(g) if g < 2.0 => Err(Error::InvalidSpec(format!(
                "gamma = {g} < 2; ultra-long-range couplings are not supported"
            ))),
            Gamma::Finite(_) => Ok(()),
        }
    }
}

impl From<f64> for Gamma {
    fn from(g: f64) -> Self {
        if g == f64::INFINITY {
            Gamma::Infinite
        } else {
            Gamma::Finite(g)
        }
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gamma::Finite(g) => write!(f, "{g}"),
            Gamma::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Gamma {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let gamma = match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "nn" => Gamma::Infinite,
            other => {
                let g: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidSpec(format!("cannot parse gamma from {s:?}")))?;
                Gamma::from(g)
            }
        };
        gamma.validate()?;
        Ok(gamma)
    }
}

impl Serialize for Gamma {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gamma::Finite(g) => serializer.serialize_f64(*g),
            Gamma::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Gamma {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        let gamma = match Repr::deserialize(deserializer)? {
            Repr::Num(g) => Gamma::from(g),
            Repr::Str(s) => return s.parse().map_err(serde::de::Error::custom),
        };
        gamma.validate().map_err(serde::de::Error::custom)?;
        Ok(gamma)
    }
}

/// Model definition: node count, decay exponent and coupling cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRingSpec")]
pub struct RingSpec {
    n_nodes: usize,
    gamma: Gamma,
    r_max: usize,
}

#[derive(Deserialize)]
struct RawRingSpec {
    n_nodes: usize,
    gamma: Gamma,
    r_max: Option<usize>,
}

impl TryFrom<RawRingSpec> for RingSpec {
    type Error = Error;

    fn try_from(raw: RawRingSpec) -> Result<Self> {
        match raw.r_max {
            Some(r) => RingSpec::with_cutoff(raw.n_nodes, raw.gamma, r),
            None => RingSpec::new(raw.n_nodes, raw.gamma),
        }
    }
}

impl RingSpec {
    /// Ring with the natural cutoff `r_max = floor(N/2)`.
    pub fn new(n_nodes: usize, gamma: impl Into<Gamma>) -> Result<Self> {
        Self::with_cutoff(n_nodes, gamma, n_nodes / 2)
    }

    pub fn with_cutoff(n_nodes: usize, gamma: impl Into<Gamma>, r_max: usize) -> Result<Self> {
        let gamma = gamma.into();
        if n_nodes < 3 {
            return Err(Error::InvalidSpec(format!("N = {n_nodes} < 3")));
        }
        gamma.validate()?;
        if r_max < 1 || r_max > n_nodes / 2 {
            return Err(Error::InvalidSpec(format!(
                "r_max = {r_max} outside [1, {}]",
                n_nodes / 2
            )));
        }
        Ok(Self {
            n_nodes,
            gamma,
            r_max,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn gamma(&self) -> Gamma {
        self.gamma
    }

    pub fn r_max(&self) -> usize {
        self.r_max
    }

    /// Largest distance that actually carries a coupling.
    pub fn effective_r_max(&self) -> usize {
        if self.gamma.is_infinite() {
            1
        } else {
            self.r_max
        }
    }

    /// Whether distance `r` is the antipode of an even ring, reached by one site only.
    pub fn is_antipodal(&self, r: usize) -> bool {
        self.n_nodes.is_multiple_of(2) && r == self.n_nodes / 2
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} gamma={} r_max={}", self.n_nodes, self.gamma, self.r_max)
    }
}

/// Coupling amplitudes `R^-gamma` for `R = 1..=effective_r_max`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingTable {
    spec: RingSpec,
    amplitudes: Vec<f64>,
}

impl CouplingTable {
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    /// Amplitude at distance `r`, or `None` if `r` carries no coupling.
    pub fn get(&self, r: usize) -> Option<f64> {
        r.checked_sub(1).and_then(|i| self.amplitudes.get(i)).copied()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `(R, amplitude)` pairs in ascending `R`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.amplitudes.iter().enumerate().map(|(i, &c)| (i + 1, c))
    }

    /// `(R, weight)` pairs for the Bloch sum, where the antipodal distance of
    /// an even ring enters with half weight.
    pub fn bloch_weights(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.iter().map(|(r, c)| {
            if self.spec.is_antipodal(r) {
                (r, 0.5 * c)
            } else {
                (r, c)
            }
        })
    }
}

pub fn build_coupling_table(spec: &RingSpec) -> CouplingTable {
    let amplitudes = (1..=spec.effective_r_max())
        .map(|r| spec.gamma.coupling(r))
        .collect();
    CouplingTable {
        spec: *spec,
        amplitudes,
    }
}

/// Minimal distance between nodes `j` and `k` on a ring of `n` nodes.
pub fn ring_distance(j: usize, k: usize, n: usize) -> Result<usize> {
    for index in [j, k] {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
    }
    let d = j.abs_diff(k);
    Ok(d.min(n - d))
}

/// Dense real symmetric Hamiltonian of a ring.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    spec: RingSpec,
    entries: DMatrix<f64>,
}

impl HamiltonianMatrix {
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[(j, k)]
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }
}

/// Builds the full `N x N` matrix. Memory is `8 N^2` bytes; intended for
/// oracle work on small rings.
pub fn build_hamiltonian(spec: &RingSpec) -> HamiltonianMatrix {
    let n = spec.n_nodes;
    let table = build_coupling_table(spec);

    let mut row = vec![0.0; n];
    for (k, slot) in row.iter_mut().enumerate().skip(1) {
        let d = k.min(n - k);
        if let Some(c) = table.get(d) {
            *slot = -c;
        }
    }
    row[0] = -row[1..].iter().sum::<f64>();

    let entries = DMatrix::from_fn(n, n, |j, k| row[(k + n - j) % n]);
    HamiltonianMatrix {
        spec: *spec,
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize, gamma: impl Into<Gamma>) -> RingSpec {
        RingSpec::new(n, gamma).unwrap()
    }

    #[test]
    fn coupling_table_gamma_two() {
        let t = build_coupling_table(&spec(10, 2.0));
        let got: Vec<f64> = t.iter().map(|(_, c)| c).collect();
        assert_eq!(got, vec![1.0, 0.25, 1.0 / 9.0, 0.0625, 0.04]);
    }

    #[test]
    fn coupling_table_nearest_neighbour() {
        let t = build_coupling_table(&spec(10, Gamma::Infinite));
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(1), Some(1.0));
        assert_eq!(t.get(2), None);
    }

    #[test]
    fn coupling_table_gamma_four() {
        let t = build_coupling_table(&RingSpec::with_cutoff(8, 4.0, 4).unwrap());
        let got: Vec<f64> = t.iter().map(|(_, c)| c).collect();
        assert_eq!(got, vec![1.0, 1.0 / 16.0, 1.0 / 81.0, 1.0 / 256.0]);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(matches!(RingSpec::new(2, 2.0), Err(Error::InvalidSpec(_))));
        assert!(matches!(RingSpec::new(10, 1.5), Err(Error::InvalidSpec(_))));
        assert!(matches!(RingSpec::new(10, f64::NAN), Err(Error::InvalidSpec(_))));
        assert!(RingSpec::with_cutoff(10, 2.0, 0).is_err());
        assert!(RingSpec::with_cutoff(10, 2.0, 6).is_err());
        assert!(RingSpec::with_cutoff(11, 2.0, 5).is_ok());
    }

    #[test]
    fn gamma_parsing() {
        assert_eq!("inf".parse::<Gamma>().unwrap(), Gamma::Infinite);
        assert_eq!(" 2.5 ".parse::<Gamma>().unwrap(), Gamma::Finite(2.5));
        assert!("1.9".parse::<Gamma>().is_err());
        assert!("abc".parse::<Gamma>().is_err());
        assert_eq!(Gamma::from(f64::INFINITY), Gamma::Infinite);
    }

    #[test]
    fn spec_json_round_trip() {
        let s = spec(16, Gamma::Infinite);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n_nodes":16,"gamma":"inf","r_max":8}"#);
        let back: RingSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        let defaulted: RingSpec = serde_json::from_str(r#"{"n_nodes":9,"gamma":3}"#).unwrap();
        assert_eq!(defaulted.r_max(), 4);
        assert!(serde_json::from_str::<RingSpec>(r#"{"n_nodes":9,"gamma":1}"#).is_err());
    }

    #[test]
    fn ring_distance_examples() {
        assert_eq!(ring_distance(0, 3, 10).unwrap(), 3);
        assert_eq!(ring_distance(1, 9, 10).unwrap(), 2);
        assert_eq!(ring_distance(0, 5, 10).unwrap(), 5);
        assert_eq!(
            ring_distance(0, 10, 10),
            Err(Error::IndexOutOfRange { index: 10, n: 10 })
        );
    }

    fn row0(h: &HamiltonianMatrix) -> Vec<f64> {
        (0..h.dim()).map(|k| h.get(0, k)).collect()
    }

    #[test]
    fn hamiltonian_nn_cycle() {
        let h = build_hamiltonian(&spec(4, Gamma::Infinite));
        assert_eq!(row0(&h), vec![2.0, -1.0, 0.0, -1.0]);
    }

    #[test]
    fn hamiltonian_antipode_counted_once() {
        let h = build_hamiltonian(&RingSpec::with_cutoff(4, 2.0, 2).unwrap());
        assert_eq!(row0(&h), vec![2.25, -1.0, -0.25, -1.0]);
    }

    #[test]
    fn hamiltonian_odd_ring() {
        let h = build_hamiltonian(&RingSpec::with_cutoff(5, 2.0, 2).unwrap());
        assert_eq!(row0(&h), vec![2.5, -1.0, -0.25, -0.25, -1.0]);
    }

    #[test]
    fn nn_limit_matches_cutoff_one() {
        for n in [3, 4, 7, 10] {
            let a = build_hamiltonian(&spec(n, Gamma::Infinite));
            let b = build_hamiltonian(&RingSpec::with_cutoff(n, 2.0, 1).unwrap());
            assert_eq!(a.entries(), b.entries());
        }
    }

    #[test]
    fn off_diagonal_decreases_with_gamma() {
        let n = 12;
        for r in 2..=6 {
            let mut prev = f64::INFINITY;
            for g in [2.0, 2.5, 3.0, 4.0, 6.0] {
                let v = build_hamiltonian(&spec(n, g)).get(0, r).abs();
                assert!(v < prev);
                prev = v;
            }
        }
    }
}
