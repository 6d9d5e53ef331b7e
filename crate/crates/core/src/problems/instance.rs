//! Plain-text instance format.
//!
//! ```text
//! # kind=bilinear_game d1=3 d2=2 seed=7
//! name,row,col,value
//! K,0,0,0.25
//! ...
//! ```
//!
//! Values use Rust's shortest round-trip `f64` formatting, so parsing a
//! written instance reproduces it bit for bit. Vectors are single-column
//! arrays.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use super::generators::{
    basis_pursuit_instance, bilinear_game_instance, rotation_worst_case, strongly_monotone_toy, toy_start, tv_instance,
};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceKind {
    Rotation,
    StronglyMonotone,
    BasisPursuit,
    BilinearGame,
    TotalVariation,
}

impl InstanceKind {
    pub fn name(self) -> &'static str {
        match self {
            InstanceKind::Rotation => "rotation",
            InstanceKind::StronglyMonotone => "strongly_monotone",
            InstanceKind::BasisPursuit => "basis_pursuit",
            InstanceKind::BilinearGame => "bilinear_game",
            InstanceKind::TotalVariation => "tv",
        }
    }
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            InstanceKind::Rotation,
            InstanceKind::StronglyMonotone,
            InstanceKind::BasisPursuit,
            InstanceKind::BilinearGame,
            InstanceKind::TotalVariation,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown instance kind '{s}'")))
    }
}

/// A generated instance: its generation parameters and named arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub kind: InstanceKind,
    /// Generation parameters in header order (dimensions, scalars, seed).
    pub params: Vec<(String, String)>,
    pub arrays: Vec<(String, Matrix<f64>)>,
}

fn column(v: &Vector<f64>) -> Matrix<f64> {
    Matrix::from_row_major(v.dim(), 1, v.as_slice().to_vec()).expect("column shape")
}

impl ProblemInstance {
    fn new(kind: InstanceKind, params: Vec<(&str, String)>, arrays: Vec<(&str, Matrix<f64>)>) -> Self {
        ProblemInstance {
            kind,
            params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            arrays: arrays.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    /// Arrays: `M`, `x0`, `x_star`.
    pub fn rotation(n: usize, lambda: f64) -> Result<Self> {
        let m = rotation_worst_case(n, lambda)?;
        Ok(Self::new(
            InstanceKind::Rotation,
            vec![("N", n.to_string()), ("lambda", lambda.to_string())],
            vec![
                ("M", m.into_matrix()),
                ("x0", column(&toy_start())),
                ("x_star", column(&Vector::zeros(2))),
            ],
        ))
    }

    /// Arrays: `M`, `x0`, `x_star`.
    pub fn strongly_monotone(n: usize, lambda: f64, mu: f64) -> Result<Self> {
        let m = strongly_monotone_toy(n, lambda, mu)?;
        Ok(Self::new(
            InstanceKind::StronglyMonotone,
            vec![("N", n.to_string()), ("lambda", lambda.to_string()), ("mu", mu.to_string())],
            vec![
                ("M", m.into_matrix()),
                ("x0", column(&toy_start())),
                ("x_star", column(&Vector::zeros(2))),
            ],
        ))
    }

    /// Arrays: `A`, `b`, `u_true`.
    pub fn basis_pursuit(d1: usize, d2: usize, seed: u64) -> Result<Self> {
        let (a, b, u) = basis_pursuit_instance(d1, d2, seed)?;
        Ok(Self::new(
            InstanceKind::BasisPursuit,
            vec![("d1", d1.to_string()), ("d2", d2.to_string()), ("seed", seed.to_string())],
            vec![("A", a), ("b", column(&b)), ("u_true", column(&u))],
        ))
    }

    /// Arrays: `K`, `a`, `b`.
    pub fn bilinear_game(d1: usize, d2: usize, seed: u64) -> Result<Self> {
        let (k, a, b) = bilinear_game_instance(d1, d2, seed)?;
        Ok(Self::new(
            InstanceKind::BilinearGame,
            vec![("d1", d1.to_string()), ("d2", d2.to_string()), ("seed", seed.to_string())],
            vec![("K", k), ("a", column(&a)), ("b", column(&b))],
        ))
    }

    /// Arrays: `H`, `b`, `x_true`, `D`.
    pub fn total_variation(d1: usize, p: usize, seed: u64, noise_scale: f64) -> Result<Self> {
        let tv = tv_instance(d1, p, seed, noise_scale)?;
        Ok(Self::new(
            InstanceKind::TotalVariation,
            vec![
                ("d1", d1.to_string()),
                ("d2", (d1 - 1).to_string()),
                ("p", p.to_string()),
                ("noise_scale", noise_scale.to_string()),
                ("seed", seed.to_string()),
            ],
            vec![
                ("H", tv.h),
                ("b", column(&tv.b)),
                ("x_true", column(&tv.x_true)),
                ("D", tv.d),
            ],
        ))
    }

    pub fn param(&self, key: &str) -> Option<&str> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        let raw = self
            .param(key)
            .ok_or_else(|| Error::Parse(format!("{} header lacks '{key}'", self.kind)))?;
        raw.parse()
            .map_err(|_| Error::Parse(format!("bad value '{raw}' for '{key}'")))
    }

    pub fn seed(&self) -> Option<u64> {
        self.param("seed").and_then(|s| s.parse().ok())
    }

    pub fn matrix(&self, name: &str) -> Option<&Matrix<f64>> {
        self.arrays.iter().find(|(k, _)| k == name).map(|(_, m)| m)
    }

    /// A single-column array as a vector.
    pub fn vector(&self, name: &str) -> Option<Vector<f64>> {
        self.matrix(name)
            .filter(|m| m.cols() == 1)
            .map(|m| Vector::from_vec(m.as_slice().to_vec()))
    }

    /// Known optimum, for the analytic toy problems.
    pub fn known_optimum(&self) -> Option<Vector<f64>> {
        self.vector("x_star")
    }

    /// Runs the generator again from the header parameters.
    pub fn regenerate(&self) -> Result<Self> {
        match self.kind {
            InstanceKind::Rotation => Self::rotation(self.parsed("N")?, self.parsed("lambda")?),
            InstanceKind::StronglyMonotone => {
                Self::strongly_monotone(self.parsed("N")?, self.parsed("lambda")?, self.parsed("mu")?)
            }
            InstanceKind::BasisPursuit => Self::basis_pursuit(self.parsed("d1")?, self.parsed("d2")?, self.parsed("seed")?),
            InstanceKind::BilinearGame => Self::bilinear_game(self.parsed("d1")?, self.parsed("d2")?, self.parsed("seed")?),
            InstanceKind::TotalVariation => Self::total_variation(
                self.parsed("d1")?,
                self.parsed("p")?,
                self.parsed("seed")?,
                self.parsed("noise_scale")?,
            ),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# kind={}", self.kind);
        for (k, v) in &self.params {
            write!(out, " {k}={v}").expect("write to string");
        }
        out.push_str("\nname,row,col,value\n");
        for (name, m) in &self.arrays {
            for i in 0..m.rows() {
                for (j, value) in m.row(i).iter().enumerate() {
                    writeln!(out, "{name},{i},{j},{value}").expect("write to string");
                }
            }
        }
        out
    }

    /// Parses [`to_csv`](Self::to_csv) output. Array shapes are taken from the
    /// largest indices present; missing entries are zero.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .and_then(|l| l.strip_prefix('#'))
            .ok_or_else(|| Error::Parse("missing '#' header line".into()))?;
        let mut kind = None;
        let mut params = Vec::new();
        for token in header.split_whitespace() {
            let (k, v) = token
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed header token '{token}'")))?;
            if k == "kind" {
                kind = Some(v.parse::<InstanceKind>()?);
            } else {
                params.push((k.to_string(), v.to_string()));
            }
        }
        let kind = kind.ok_or_else(|| Error::Parse("header lacks kind".into()))?;
        match lines.next() {
            Some("name,row,col,value") => {}
            other => return Err(Error::Parse(format!("expected column header, got {other:?}"))),
        }

        let mut entries: Vec<(String, Vec<(usize, usize, f64)>)> = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            let [name, row, col, value] = fields[..] else {
                return Err(Error::Parse(format!("line {}: expected 4 fields", n + 3)));
            };
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", n + 3));
            let row: usize = row.parse().map_err(|_| bad("row"))?;
            let col: usize = col.parse().map_err(|_| bad("col"))?;
            let value: f64 = value.parse().map_err(|_| bad("value"))?;
            match entries.iter_mut().find(|(k, _)| k == name) {
                Some((_, list)) => list.push((row, col, value)),
                None => entries.push((name.to_string(), vec![(row, col, value)])),
            }
        }
        let arrays = entries
            .into_iter()
            .map(|(name, list)| {
                let rows = list.iter().map(|e| e.0 + 1).max().unwrap_or(0);
                let cols = list.iter().map(|e| e.1 + 1).max().unwrap_or(0);
                let mut data = vec![0.0; rows * cols];
                for (i, j, v) in list {
                    data[i * cols + j] = v;
                }
                (name, Matrix::from_row_major(rows, cols, data).expect("shape from indices"))
            })
            .collect();
        Ok(ProblemInstance { kind, params, arrays })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_rows() {
        let inst = ProblemInstance::rotation(5, 1.0).unwrap();
        let csv = inst.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# kind=rotation N=5 lambda=1"));
        assert_eq!(lines.next(), Some("name,row,col,value"));
        assert_eq!(lines.next(), Some("M,0,0,0"));
        assert_eq!(lines.next(), Some("M,0,1,0.5"));
        assert_eq!(inst.known_optimum(), Some(Vector::zeros(2)));
    }

    #[test]
    fn written_instance_parses_bit_identically_and_regenerates() {
        let inst = ProblemInstance::total_variation(12, 3, 99, 0.1).unwrap();
        let parsed = ProblemInstance::from_csv(&inst.to_csv()).unwrap();
        assert_eq!(parsed, inst);
        assert_eq!(parsed.regenerate().unwrap(), inst);
        assert_eq!(parsed.seed(), Some(99));
        assert_eq!(parsed.matrix("D").unwrap().shape(), (11, 12));
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(ProblemInstance::from_csv("kind=tv\n").is_err());
        assert!(ProblemInstance::from_csv("# kind=nope\nname,row,col,value\n").is_err());
        assert!(ProblemInstance::from_csv("# kind=tv\nname,row,col,value\nH,0,x,1\n").is_err());
        assert!(ProblemInstance::from_csv("# kind=tv\nname,row,col,value\nH,0,0\n").is_err());
        let inst = ProblemInstance::from_csv("# kind=tv d1=4\nname,row,col,value\n").unwrap();
        assert!(inst.regenerate().is_err());
    }
}
