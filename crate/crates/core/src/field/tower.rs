use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::gf::{gcd, is_prime, Gf};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Base {
    Finite { p: u32, k: u32 },
    /// Algebraic closure of `F_p`.
    ClosureFp { p: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LayerKind {
    Rational,
    /// `k((t))`, restricted to the tame subfield `k(t)`.
    Laurent,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Layer {
    pub var: String,
    pub kind: LayerKind,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct TowerSpec {
    base: Base,
    layers: Vec<Layer>,
}

/// A field in a tower `base, layer_1, ..., layer_depth`.
///
/// Towers sharing a prefix share their spec; [`FieldTower::sub`] gives the
/// residue field of the top Laurent or degree-one place.
#[derive(Clone)]
pub struct FieldTower {
    spec: Arc<TowerSpec>,
    gf: Arc<Gf>,
    depth: usize,
}

impl PartialEq for FieldTower {
    fn eq(&self, o: &Self) -> bool {
        self.depth == o.depth
            && self.spec.base == o.spec.base
            && self.spec.layers[..self.depth] == o.spec.layers[..o.depth]
    }
}
impl Eq for FieldTower {}

impl std::hash::Hash for FieldTower {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.spec.base.hash(h);
        self.spec.layers[..self.depth].hash(h);
    }
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldTower({self})")
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.spec.base {
            Base::Finite { p, k } => write!(f, "Fq({p},{k})")?,
            Base::ClosureFp { p } => write!(f, "Fpbar({p})")?,
        }
        for layer in self.layers() {
            match layer.kind {
                LayerKind::Rational => write!(f, "({})", layer.var)?,
                LayerKind::Laurent => write!(f, "(({}))", layer.var)?,
            }
        }
        Ok(())
    }
}

fn valid_var(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "g"
}

impl FieldTower {
    pub fn finite(p: u32, k: u32) -> Result<FieldTower> {
        let gf = Gf::get(p, k)?;
        Ok(FieldTower { spec: Arc::new(TowerSpec { base: Base::Finite { p, k }, layers: vec![] }), gf, depth: 0 })
    }

    pub fn closure(p: u32) -> Result<FieldTower> {
        let gf = Gf::get(p, 1)?;
        Ok(FieldTower { spec: Arc::new(TowerSpec { base: Base::ClosureFp { p }, layers: vec![] }), gf, depth: 0 })
    }

    pub fn from_parts(base: Base, layers: Vec<Layer>) -> Result<FieldTower> {
        let mut t = match base {
            Base::Finite { p, k } => FieldTower::finite(p, k)?,
            Base::ClosureFp { p } => FieldTower::closure(p)?,
        };
        for l in layers {
            t = t.push(&l.var, l.kind)?;
        }
        Ok(t)
    }

    fn push(&self, var: &str, kind: LayerKind) -> Result<FieldTower> {
        if !valid_var(var) {
            return Err(Error::InvalidField(format!("invalid variable name `{var}`")));
        }
        if self.layers().iter().any(|l| l.var == var) {
            return Err(Error::InvalidField(format!("variable `{var}` declared twice")));
        }
        let mut layers = self.layers().to_vec();
        layers.push(Layer { var: var.to_string(), kind });
        let depth = layers.len();
        Ok(FieldTower { spec: Arc::new(TowerSpec { base: self.spec.base.clone(), layers }), gf: self.gf.clone(), depth })
    }

    /// `self(var)`
    pub fn rational(&self, var: &str) -> Result<FieldTower> {
        self.push(var, LayerKind::Rational)
    }

    /// `self((var))`
    pub fn laurent(&self, var: &str) -> Result<FieldTower> {
        self.push(var, LayerKind::Laurent)
    }

    /// Parse `Fq(p,k)`, `Fpbar(p)` followed by `(var)` / `((var))` layers.
    pub fn parse(s: &str) -> Result<FieldTower> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |m: &str| Error::InvalidField(format!("{m} in `{s}`"));
        let (mut t, mut rest) = if let Some(r) = s.strip_prefix("Fq(") {
            let close = r.find(')').ok_or_else(|| bad("unclosed Fq("))?;
            let args: Vec<&str> = r[..close].split(',').collect();
            if args.len() != 2 {
                return Err(bad("Fq expects two arguments"));
            }
            let p: u32 = args[0].parse().map_err(|_| bad("bad characteristic"))?;
            let k: u32 = args[1].parse().map_err(|_| bad("bad degree"))?;
            (FieldTower::finite(p, k)?, &r[close + 1..])
        } else if let Some(r) = s.strip_prefix("Fpbar(") {
            let close = r.find(')').ok_or_else(|| bad("unclosed Fpbar("))?;
            let p: u32 = r[..close].parse().map_err(|_| bad("bad characteristic"))?;
            (FieldTower::closure(p)?, &r[close + 1..])
        } else {
            return Err(bad("expected Fq(p,k) or Fpbar(p)"));
        };
        while !rest.is_empty() {
            if let Some(r) = rest.strip_prefix("((") {
                let close = r.find("))").ok_or_else(|| bad("unclosed (("))?;
                t = t.laurent(&r[..close])?;
                rest = &r[close + 2..];
            } else if let Some(r) = rest.strip_prefix('(') {
                let close = r.find(')').ok_or_else(|| bad("unclosed ("))?;
                t = t.rational(&r[..close])?;
                rest = &r[close + 1..];
            } else {
                return Err(bad("unexpected trailing text"));
            }
        }
        Ok(t)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }
    pub fn base(&self) -> &Base {
        &self.spec.base
    }
    pub fn layers(&self) -> &[Layer] {
        &self.spec.layers[..self.depth]
    }
    /// Layer `i` (1-based, matching value levels).
    pub fn layer(&self, i: usize) -> &Layer {
        &self.spec.layers[i - 1]
    }
    pub fn top(&self) -> Option<&Layer> {
        self.layers().last()
    }
    pub fn gf(&self) -> &Arc<Gf> {
        &self.gf
    }
    pub fn characteristic(&self) -> u32 {
        self.gf.p()
    }
    pub fn is_closure(&self) -> bool {
        matches!(self.spec.base, Base::ClosureFp { .. })
    }
    /// Size of the finite base, `None` over a closure.
    pub fn base_size(&self) -> Option<u64> {
        match self.spec.base {
            Base::Finite { .. } => Some(self.gf.size() as u64),
            Base::ClosureFp { .. } => None,
        }
    }

    /// The prefix tower of the given depth.
    pub fn sub(&self, depth: usize) -> FieldTower {
        assert!(depth <= self.depth);
        FieldTower { spec: self.spec.clone(), gf: self.gf.clone(), depth }
    }

    pub fn is_prefix_of(&self, o: &FieldTower) -> bool {
        self.depth <= o.depth && self.spec.base == o.spec.base && self.layers() == &o.spec.layers[..self.depth]
    }

    pub fn var_level(&self, name: &str) -> Option<usize> {
        self.layers().iter().position(|l| l.var == name).map(|i| i + 1)
    }

    /// Check that `mu_n` lies in the base (and `n` is prime to the characteristic).
    pub fn check_roots_of_unity(&self, n: u32) -> Result<()> {
        let p = self.characteristic();
        if n == 0 {
            return Err(Error::RootsOfUnityMissing { n, q: self.gf.size() as u64 });
        }
        if gcd(n as u64, p as u64) != 1 {
            return Err(Error::CharacteristicDivides { p, n });
        }
        if let Some(q) = self.base_size() {
            if (q - 1) % n as u64 != 0 {
                return Err(Error::RootsOfUnityMissing { n, q });
            }
        }
        Ok(())
    }

    /// Number of leading Laurent layers at the top, and the depth below them.
    pub fn laurent_split(&self) -> (usize, usize) {
        let mut d = self.depth;
        while d > 0 && self.layer(d).kind == LayerKind::Laurent {
            d -= 1;
        }
        (self.depth - d, d)
    }

    pub fn is_valid_char(p: u32) -> bool {
        is_prime(p as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["Fq(5,1)(x)((y))", "Fpbar(5)(x)((x2))((x3))", "Fq(13,1)(t)", "Fq(5,1)((x))((y))", "Fq(5,2)"] {
            let t = FieldTower::parse(s).unwrap();
            assert_eq!(t.to_string(), s);
            assert_eq!(FieldTower::parse(&t.to_string()).unwrap(), t);
        }
    }

    #[test]
    fn rejects_bad_towers() {
        assert!(matches!(FieldTower::parse("Fq(4,1)"), Err(Error::InvalidField(_))));
        assert!(FieldTower::parse("Fq(5,1)(x)(x)").is_err());
        assert!(FieldTower::parse("Fq(5,1)(g)").is_err());
        assert!(FieldTower::parse("Q(x)").is_err());
    }

    #[test]
    fn roots_of_unity_condition() {
        let t = FieldTower::parse("Fq(5,1)(t)").unwrap();
        assert!(t.check_roots_of_unity(2).is_ok());
        assert!(t.check_roots_of_unity(4).is_ok());
        assert!(matches!(t.check_roots_of_unity(3), Err(Error::RootsOfUnityMissing { .. })));
        assert!(matches!(t.check_roots_of_unity(5), Err(Error::CharacteristicDivides { .. })));
        let c = FieldTower::parse("Fpbar(5)(x)").unwrap();
        assert!(c.check_roots_of_unity(3).is_ok());
    }

    #[test]
    fn laurent_split_counts_top_layers() {
        let t = FieldTower::parse("Fq(5,1)(x)((y))((z))").unwrap();
        assert_eq!(t.laurent_split(), (2, 1));
    }
}
