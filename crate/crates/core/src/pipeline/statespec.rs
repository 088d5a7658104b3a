//! `name:key=val,key=val` descriptions of states for the command line.
//!
//! A comma-separated token without `=` continues the previous value, so
//! `dir=0,0,1` is a single three-component value.
//!
//! | name | keys |
//! |------|------|
//! | `coherent` | `j`, `N`, `dir` (default `0,0,1`) |
//! | `dicke` | `j`, `N`, `lambda` (default `0`, or `1/2` for half-integer `Nj`) |
//! | `singlet` | `j`, `N`, `variant` (`pair_product`, `permutation_invariant`, `spin1_pair`, `projector`) |
//! | `mixed` | `j`, `N` |
//! | `thermal` | `j`, `N`, `H` (`bes` or `h5`), `T` |
//! | `ground` | `j`, `N`, `H` |
//! | `psi_alpha` | `N`, `alpha` (spin 1) |
//! | `extremal` | `j`, `N`, `J` (three components), `vertex` (`A_x`, `B_y`, `Bprime_z`, ...) |
//!
//! Every name also accepts `noise=p`, mixing in white noise with weight `p`.

use indexmap::IndexMap;
use nalgebra::Vector3;

use crate::error::{Result, SpinSqError};
use crate::linalg::CMat;
use crate::spin::{Axis, HalfInt};
use crate::states::{self, EnsembleShape, ExtremalSpec, QuantumState, SingletVariant, Vertex};

#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub name: String,
    pub params: IndexMap<String, String>,
}

pub const STATE_NAMES: [&str; 8] =
    ["coherent", "dicke", "singlet", "mixed", "thermal", "ground", "psi_alpha", "extremal"];

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n.trim(), r),
            None => (text.trim(), ""),
        };
        if !STATE_NAMES.contains(&name) {
            return Err(SpinSqError::Parse(format!(
                "unknown state '{name}'; expected one of {}",
                STATE_NAMES.join(", ")
            )));
        }
        let mut params: IndexMap<String, String> = IndexMap::new();
        let mut last: Option<String> = None;
        for token in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if let Some((k, v)) = token.split_once('=') {
                let key = k.trim().to_string();
                if params.insert(key.clone(), v.trim().to_string()).is_some() {
                    return Err(SpinSqError::Parse(format!("'{key}' given twice")));
                }
                last = Some(key);
            } else {
                let key = last
                    .as_ref()
                    .ok_or_else(|| SpinSqError::Parse(format!("'{token}' has no key")))?;
                let v = params.get_mut(key).expect("key was inserted");
                v.push(',');
                v.push_str(token);
            }
        }
        Ok(Self {
            name: name.to_string(),
            params,
        })
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.raw(key)
            .ok_or_else(|| SpinSqError::Parse(format!("state '{}' needs '{key}='", self.name)))
    }

    fn number(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| v.parse::<f64>().map_err(|_| SpinSqError::Parse(format!("'{key}={v}' is not a number"))))
            .transpose()
    }

    fn vector(&self, key: &str) -> Result<Option<Vector3<f64>>> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        let parts: Vec<f64> = v
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| SpinSqError::Parse(format!("'{key}={v}' is not a list of numbers")))?;
        match parts[..] {
            [x, y, z] => Ok(Some(Vector3::new(x, y, z))),
            _ => Err(SpinSqError::Parse(format!("'{key}' needs three components, got {v}"))),
        }
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for k in self.params.keys() {
            if k != "noise" && !allowed.contains(&k.as_str()) {
                return Err(SpinSqError::Parse(format!(
                    "state '{}' does not take '{k}'; allowed: {}",
                    self.name,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn shape(&self, guard: usize, fixed_j: Option<HalfInt>) -> Result<EnsembleShape> {
        let j = match fixed_j {
            Some(j) => j,
            None => self.required("j")?.parse::<HalfInt>()?,
        };
        let n_text = self.required("N")?;
        let n: usize = n_text
            .parse()
            .map_err(|_| SpinSqError::Parse(format!("'N={n_text}' is not a positive integer")))?;
        EnsembleShape::with_guard(n, j, guard)
    }

    fn hamiltonian(&self, shape: &EnsembleShape) -> Result<CMat> {
        match self.required("H")? {
            "bes" => states::total_spin_squared(shape),
            "h5" => states::h5_hamiltonian(shape),
            other => Err(SpinSqError::Parse(format!("unknown Hamiltonian '{other}'; expected bes or h5"))),
        }
    }

    /// Builds the state under the given dimension guard.
    pub fn build(&self, guard: usize) -> Result<QuantumState> {
        let state = match self.name.as_str() {
            "coherent" => {
                self.check_keys(&["j", "N", "dir"])?;
                let dir = self.vector("dir")?.unwrap_or_else(Vector3::z);
                states::coherent_ensemble(self.shape(guard, None)?, &dir)?
            }
            "dicke" => {
                self.check_keys(&["j", "N", "lambda"])?;
                let shape = self.shape(guard, None)?;
                let lambda = match self.raw("lambda") {
                    Some(v) => v.parse::<HalfInt>()?,
                    None => HalfInt::from_twice((shape.n() as i32 * shape.j().twice()) % 2),
                };
                states::dicke_state(shape, lambda)?
            }
            "singlet" => {
                self.check_keys(&["j", "N", "variant"])?;
                let shape = self.shape(guard, None)?;
                let variant = match self.raw("variant") {
                    Some(v) => v.parse::<SingletVariant>()?,
                    None => SingletVariant::default_for(&shape),
                };
                states::singlet_state(shape, variant)?
            }
            "mixed" => {
                self.check_keys(&["j", "N"])?;
                states::completely_mixed(self.shape(guard, None)?)
            }
            "thermal" => {
                self.check_keys(&["j", "N", "H", "T"])?;
                let shape = self.shape(guard, None)?;
                let t = self.number("T")?.ok_or_else(|| SpinSqError::Parse("thermal needs 'T='".into()))?;
                states::thermal_state(shape, &self.hamiltonian(&shape)?, t)?
            }
            "ground" => {
                self.check_keys(&["j", "N", "H"])?;
                let shape = self.shape(guard, None)?;
                states::ground_space_state(shape, &self.hamiltonian(&shape)?, 1e-9)?.0
            }
            "psi_alpha" => {
                self.check_keys(&["N", "alpha"])?;
                let shape = self.shape(guard, Some(HalfInt::from_twice(2)))?;
                let alpha = self
                    .number("alpha")?
                    .ok_or_else(|| SpinSqError::Parse("psi_alpha needs 'alpha='".into()))?;
                states::psi_alpha(shape.n(), alpha)?
            }
            "extremal" => {
                self.check_keys(&["j", "N", "J", "vertex"])?;
                let shape = self.shape(guard, None)?;
                let jvec = self.vector("J")?.unwrap_or_else(Vector3::zeros);
                let vertex = parse_vertex(self.required("vertex")?)?;
                states::extremal_state(&ExtremalSpec::new(shape, jvec)?, vertex)?
            }
            _ => unreachable!("names are checked while parsing"),
        };
        match self.number("noise")? {
            Some(p) => states::mix_with_white_noise(&state, p),
            None => Ok(state),
        }
    }
}

pub fn parse_vertex(s: &str) -> Result<Vertex> {
    let bad = || SpinSqError::Parse(format!("'{s}' is not a vertex like A_x, B_y or Bprime_z"));
    let (kind, axis) = s.split_once('_').ok_or_else(bad)?;
    let axis: Axis = axis.parse().map_err(|_| bad())?;
    match kind {
        "A" => Ok(Vertex::A(axis)),
        "B" => Ok(Vertex::B(axis)),
        "Bprime" => Ok(Vertex::BPrime(axis)),
        _ => Err(bad()),
    }
}
