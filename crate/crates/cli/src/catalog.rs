//! Built-in benchmark systems.

use serde::{Deserialize, Serialize};

use colldyn_core::{DynSystem, Error, FiniteSpace, Result};

/// A rotation angle, numeric or named.
#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(untagged)]
pub enum Theta {
    Value(f64),
    Name(String),
}

impl Theta {
    pub fn value(&self) -> Result<f64> {
        match self {
            Theta::Value(t) => Ok(*t),
            Theta::Name(n) => match n.as_str() {
                "golden" => Ok((5f64.sqrt() - 1.0) / 2.0),
                "silver" => Ok(2f64.sqrt() - 1.0),
                _ => Err(Error::invalid("theta", format!("unknown constant '{n}'"))),
            },
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    Rotation {
        theta: Theta,
    },
    Doubling,
    /// `map[i]` is the image of point `i`; the metric defaults to discrete.
    Finite {
        map: Vec<usize>,
        #[serde(default)]
        metric: Option<Vec<Vec<f64>>>,
    },
    Identity {
        points: usize,
    },
    /// The `n`-fold product of one system with itself.
    Product {
        system: Box<SystemSpec>,
        n: usize,
    },
    ProductOf {
        factors: Vec<SystemSpec>,
    },
    /// The absorber `0 -> 1 -> 1`.
    Wandering,
    /// `i -> i + 1` on the path `0, 1, ..., len - 1` with distance `|i - j|`;
    /// the last point is fixed.
    Translation {
        len: usize,
    },
}

impl SystemSpec {
    pub fn build(&self) -> Result<DynSystem> {
        match self {
            SystemSpec::Rotation { theta } => Ok(DynSystem::rotation(theta.value()?)),
            SystemSpec::Doubling => Ok(DynSystem::doubling()),
            SystemSpec::Finite { map, metric } => match metric {
                None => DynSystem::finite_discrete(map.clone()),
                Some(rows) => DynSystem::finite(FiniteSpace::with_metric(rows)?, map.clone()),
            },
            SystemSpec::Identity { points } => {
                Ok(DynSystem::identity(colldyn_core::Space::discrete(*points)?))
            }
            SystemSpec::Product { system, n } => system.build()?.n_fold(*n),
            SystemSpec::ProductOf { factors } => DynSystem::product(
                factors.iter().map(SystemSpec::build).collect::<Result<Vec<_>>>()?,
            ),
            SystemSpec::Wandering => DynSystem::finite_discrete(vec![1, 1]),
            SystemSpec::Translation { len } => {
                if *len == 0 {
                    return Err(Error::Empty("path"));
                }
                let rows: Vec<Vec<f64>> = (0..*len)
                    .map(|i| (0..*len).map(|j| i.abs_diff(j) as f64).collect())
                    .collect();
                let map = (0..*len).map(|i| (i + 1).min(len - 1)).collect();
                DynSystem::finite(FiniteSpace::with_metric(&rows)?, map)
            }
        }
    }
}

pub struct CatalogEntry {
    pub kind: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub fn catalog() -> Vec<CatalogEntry> {
    let e = |kind, params, description| CatalogEntry { kind, params, description };
    vec![
        e("rotation", "theta = <number> | \"golden\" | \"silver\"", "x -> x + theta mod 1 on the circle"),
        e("doubling", "", "x -> 2x mod 1 on the circle, exact on rationals"),
        e("finite", "map = [..], metric = [[..]] (optional)", "self-map of a finite metric space"),
        e("identity", "points = N", "identity on N discrete points"),
        e("product", "system = {..}, n = N", "N-fold product with the max metric"),
        e("product_of", "factors = [{..}, ..]", "product of different systems"),
        e("wandering", "", "the absorber 0 -> 1 -> 1; point 0 never returns"),
        e("translation", "len = L", "i -> i + 1 on a path of length L, last point fixed"),
    ]
}

pub fn render_catalog() -> String {
    let mut out = String::new();
    for c in catalog() {
        out.push_str(&format!("{:<12} {:<42} {}\n", c.kind, c.params, c.description));
    }
    out
}
