use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use super::symbol::BlochSymbol;
use super::{apply_perturbation, bkc_bc, bosonic_ssh_bc, photo_magnonic_chain_bc};
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::qbh::QuadraticHamiltonian;

/// A real or complex model parameter.
///
/// Serialized as a bare number when the imaginary part is zero and as a
/// two-element array `[re, im]` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar(pub C64);

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar(C64::new(x, 0.0))
    }
}

impl From<C64> for Scalar {
    fn from(z: C64) -> Self {
        Scalar(z)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            s.serialize_f64(self.0.re)
        } else {
            let mut seq = s.serialize_seq(Some(2))?;
            seq.serialize_element(&self.0.re)?;
            seq.serialize_element(&self.0.im)?;
            seq.end()
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Scalar;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a [re, im] pair")
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::from(x))
            }
            fn visit_i64<E: de::Error>(self, x: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::from(x as f64))
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::from(x as f64))
            }
            fn visit_seq<A: de::SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Scalar, A::Error> {
                let re: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let im: f64 = seq.next_element()?.ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<f64>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Scalar(C64::new(re, im)))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelName {
    PhotoMagnonic,
    PhotoMagnonicRWA,
    BKC,
    BosonicSSH,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum PerturbationKind {
    MagnonHopping,
    SshChiralBreaking,
    LinearInterpolation { toward: Box<ModelSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    #[serde(flatten)]
    pub kind: PerturbationKind,
    pub strength: f64,
}

/// Serializable description of a model instance.
///
/// Parameter names per model:
///
/// | model | parameters |
/// |---|---|
/// | `PhotoMagnonic`, `PhotoMagnonicRWA` | `omega_a`, `omega_m` (real), `t`, `g` (complex) |
/// | `BKC` | `t`, `delta` (real) |
/// | `BosonicSSH` | `t1`, `t2` (real, positive) |
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: ModelName,
    #[serde(rename = "N")]
    pub n_cells: usize,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub n_offset: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub pbc: bool,
    pub parameters: BTreeMap<String, Scalar>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub perturbations: Vec<PerturbationSpec>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl ModelSpec {
    pub fn new(name: ModelName, n_cells: usize) -> Self {
        Self { name, n_cells, n_offset: 0, pbc: false, parameters: BTreeMap::new(), perturbations: Vec::new() }
    }

    pub fn param(mut self, key: &str, value: impl Into<Scalar>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn offset(mut self, n: usize) -> Self {
        self.n_offset = n;
        self
    }

    pub fn periodic(mut self, pbc: bool) -> Self {
        self.pbc = pbc;
        self
    }

    pub fn perturb(mut self, kind: PerturbationKind, strength: f64) -> Self {
        self.perturbations.push(PerturbationSpec { kind, strength });
        self
    }

    pub fn photo_magnonic(
        n_cells: usize,
        offset: usize,
        omega_a: f64,
        omega_m: f64,
        t: C64,
        g: C64,
        rwa: bool,
    ) -> Self {
        let name = if rwa { ModelName::PhotoMagnonicRWA } else { ModelName::PhotoMagnonic };
        Self::new(name, n_cells)
            .offset(offset)
            .param("omega_a", omega_a)
            .param("omega_m", omega_m)
            .param("t", t)
            .param("g", g)
    }

    /// The resonance-frame RWA chain after the photon gauge transformation
    /// that makes `K` purely imaginary: photon hopping `i·t` and coupling
    /// `i·g` for real `t`, `g`. This is the form in which the chain sits in
    /// the Pfaffian class without further dressing.
    pub fn photo_magnonic_gauged(n_cells: usize, offset: usize, t: f64, g: f64) -> Self {
        Self::photo_magnonic(n_cells, offset, 0.0, 0.0, C64::new(0.0, t), C64::new(0.0, g), true)
    }

    pub fn bkc(n_cells: usize, t: f64, delta: f64) -> Self {
        Self::new(ModelName::BKC, n_cells).param("t", t).param("delta", delta)
    }

    pub fn ssh(n_cells: usize, t1: f64, t2: f64) -> Self {
        Self::new(ModelName::BosonicSSH, n_cells).param("t1", t1).param("t2", t2)
    }

    fn get(&self, key: &str) -> Result<C64> {
        self.parameters
            .get(key)
            .map(|s| s.0)
            .ok_or_else(|| Error::InvalidParameter(format!("{:?} needs parameter `{key}`", self.name)))
    }

    fn get_real(&self, key: &str) -> Result<f64> {
        let z = self.get(key)?;
        if z.im != 0.0 {
            return Err(Error::InvalidParameter(format!("parameter `{key}` must be real, got {z}")));
        }
        Ok(z.re)
    }

    fn expected_keys(&self) -> &'static [&'static str] {
        match self.name {
            ModelName::PhotoMagnonic | ModelName::PhotoMagnonicRWA => &["g", "omega_a", "omega_m", "t"],
            ModelName::BKC => &["delta", "t"],
            ModelName::BosonicSSH => &["t1", "t2"],
        }
    }

    /// Checks parameter names and domains without building matrices.
    pub fn validate(&self) -> Result<()> {
        for key in self.parameters.keys() {
            if !self.expected_keys().contains(&key.as_str()) {
                return Err(Error::InvalidParameter(format!("unknown parameter `{key}` for {:?}", self.name)));
            }
        }
        if self.n_offset != 0 && !matches!(self.name, ModelName::PhotoMagnonic | ModelName::PhotoMagnonicRWA) {
            return Err(Error::InvalidParameter("n_offset only applies to photo-magnonic chains".into()));
        }
        for p in &self.perturbations {
            if let PerturbationKind::LinearInterpolation { toward } = &p.kind {
                toward.validate()?;
            }
        }
        self.build().map(|_| ())
    }

    /// Real-space Hamiltonian with all perturbations applied in order.
    pub fn build(&self) -> Result<QuadraticHamiltonian> {
        self.build_with_cells(self.n_cells, self.pbc)
    }

    pub(crate) fn build_with_cells(&self, n: usize, pbc: bool) -> Result<QuadraticHamiltonian> {
        let mut h = match self.name {
            ModelName::PhotoMagnonic | ModelName::PhotoMagnonicRWA => photo_magnonic_chain_bc(
                n,
                self.n_offset,
                self.get_real("omega_a")?,
                self.get_real("omega_m")?,
                self.get("t")?,
                self.get("g")?,
                self.name == ModelName::PhotoMagnonicRWA,
                pbc,
            )?,
            ModelName::BKC => bkc_bc(n, self.get_real("t")?, self.get_real("delta")?, pbc)?,
            ModelName::BosonicSSH => bosonic_ssh_bc(n, self.get_real("t1")?, self.get_real("t2")?, pbc)?,
        };
        for p in &self.perturbations {
            let p = match &p.kind {
                PerturbationKind::LinearInterpolation { toward } if toward.n_cells != n => {
                    let mut t = (**toward).clone();
                    t.n_cells = n;
                    PerturbationSpec {
                        kind: PerturbationKind::LinearInterpolation { toward: Box::new(t) },
                        strength: p.strength,
                    }
                }
                _ => p.clone(),
            };
            h = apply_perturbation(&h, &p)?;
        }
        Ok(h)
    }

    /// Largest hopping range of the model in unit cells.
    pub fn range(&self) -> usize {
        let own = match self.name {
            ModelName::PhotoMagnonic | ModelName::PhotoMagnonicRWA => self.n_offset.max(1),
            _ => 1,
        };
        self.perturbations
            .iter()
            .map(|p| match &p.kind {
                PerturbationKind::LinearInterpolation { toward } => toward.range(),
                _ => 1,
            })
            .fold(own, usize::max)
    }

    /// Bloch symbol read off an open chain long enough that its two central
    /// cells see every hopping.
    pub fn bloch_symbol(&self) -> Result<BlochSymbol> {
        let r = self.range();
        let n = 2 * r + 2;
        let h = self.build_with_cells(n, false)?;
        let a = BlochSymbol::from_chain(&h, r, r)?;
        let b = BlochSymbol::from_chain(&h, r + 1, r)?;
        if !a.approx_eq(&b, 1e-12) {
            return Err(Error::NotTranslationInvariant(format!(
                "{:?}: neighbouring cells see different couplings",
                self.name
            )));
        }
        Ok(a)
    }

    /// Canonical text form.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Returns a copy with the scalar at `path` replaced by `value`.
    ///
    /// Paths use dots for table keys and `[i]` for array elements, e.g.
    /// `parameters.t1` or `perturbations[0].strength`.
    pub fn with_value(&self, path: &str, value: f64) -> Result<Self> {
        let mut tree = toml::Value::try_from(self).map_err(|e| Error::Parse(e.to_string()))?;
        {
            let slot = resolve_path(&mut tree, path)?;
            *slot = if matches!(slot, toml::Value::Integer(_)) {
                if value.fract() != 0.0 || value < 0.0 {
                    return Err(Error::InvalidParameter(format!("`{path}` takes a non-negative integer, got {value}")));
                }
                toml::Value::Integer(value as i64)
            } else {
                toml::Value::Float(value)
            };
        }
        tree.try_into().map_err(|e: toml::de::Error| Error::InvalidParameter(e.to_string()))
    }

    /// `true` when `path` names an existing scalar.
    pub fn has_path(&self, path: &str) -> bool {
        match toml::Value::try_from(self) {
            Ok(mut tree) => resolve_path(&mut tree, path).is_ok(),
            Err(_) => false,
        }
    }
}

fn resolve_path<'a>(root: &'a mut toml::Value, path: &str) -> Result<&'a mut toml::Value> {
    let bad = || Error::InvalidParameter(format!("parameter path `{path}` does not exist"));
    let mut cur = root;
    for segment in path.split('.') {
        let (key, indices) = match segment.find('[') {
            Some(pos) => (&segment[..pos], &segment[pos..]),
            None => (segment, ""),
        };
        if !key.is_empty() {
            cur = cur.get_mut(key).ok_or_else(bad)?;
        }
        let mut rest = indices;
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(bad)?;
            let idx: usize = rest[1..close].parse().map_err(|_| bad())?;
            cur = cur.get_mut(idx).ok_or_else(bad)?;
            rest = &rest[close + 1..];
        }
    }
    match cur {
        toml::Value::Float(_) | toml::Value::Integer(_) => Ok(cur),
        _ => Err(bad()),
    }
}
