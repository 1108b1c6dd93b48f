//! The dP3 quiver, labeled seeds and Fomin-Zelevinsky mutation.
//!
//! Vertices are 1-indexed in the public API (matching x1..x6); storage is
//! 0-indexed.

use std::fmt;
use std::sync::OnceLock;

use crate::error::QuiverError;
use crate::laurent::{LaurentPoly, NVARS};

/// Net arrow counts: `b[i][j]` = #(i -> j) - #(j -> i).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct QuiverMatrix {
    b: [[i32; NVARS]; NVARS],
}

const DP3_ROWS: [[i32; NVARS]; NVARS] = [
    [0, 0, -1, 1, -1, 1],
    [0, 0, 1, -1, 1, -1],
    [1, -1, 0, 0, -1, 1],
    [-1, 1, 0, 0, 1, -1],
    [1, -1, 1, -1, 0, 0],
    [-1, 1, -1, 1, 0, 0],
];

fn check_vertex(v: usize) -> Result<usize, QuiverError> {
    if (1..=NVARS).contains(&v) {
        Ok(v - 1)
    } else {
        Err(QuiverError::BadVertex(v))
    }
}

impl QuiverMatrix {
    /// The Model 1 dP3 quiver read off the superpotential.
    pub fn dp3() -> Self {
        Self { b: DP3_ROWS }
    }

    pub fn from_rows(rows: [[i32; NVARS]; NVARS]) -> Result<Self, QuiverError> {
        for i in 0..NVARS {
            for j in 0..NVARS {
                if rows[i][j] != -rows[j][i] {
                    return Err(QuiverError::NotSkewSymmetric(i + 1, j + 1));
                }
            }
        }
        Ok(Self { b: rows })
    }

    pub fn rows(&self) -> &[[i32; NVARS]; NVARS] {
        &self.b
    }

    /// Entry for 1-indexed vertices.
    pub fn entry(&self, i: usize, j: usize) -> i32 {
        self.b[i - 1][j - 1]
    }

    pub fn out_degree(&self, v: usize) -> i32 {
        self.b[v - 1].iter().map(|&x| x.max(0)).sum()
    }

    pub fn in_degree(&self, v: usize) -> i32 {
        self.b[v - 1].iter().map(|&x| (-x).max(0)).sum()
    }

    /// In-degree and out-degree both equal to 2.
    pub fn is_toric(&self, v: usize) -> bool {
        self.in_degree(v) == 2 && self.out_degree(v) == 2
    }

    pub fn toric_vertices(&self) -> Vec<usize> {
        (1..=NVARS).filter(|&v| self.is_toric(v)).collect()
    }

    pub fn mutate(&self, v: usize) -> Result<Self, QuiverError> {
        let k = check_vertex(v)?;
        let b = &self.b;
        let mut out = [[0i32; NVARS]; NVARS];
        for i in 0..NVARS {
            for j in 0..NVARS {
                out[i][j] = if i == k || j == k {
                    -b[i][j]
                } else {
                    b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
                };
            }
        }
        Ok(Self { b: out })
    }

    /// Relabels so that new vertex `i` is old vertex `perm[i]` (0-indexed).
    pub fn relabel(&self, perm: &[usize; NVARS]) -> Self {
        Self {
            b: std::array::from_fn(|i| std::array::from_fn(|j| self.b[perm[i]][perm[j]])),
        }
    }

    /// Every arrow reversed.
    pub fn reversed(&self) -> Self {
        Self {
            b: self.b.map(|row| row.map(|x| -x)),
        }
    }

    /// Equal after some relabeling, optionally combined with global reversal.
    pub fn equivalent(&self, other: &Self) -> bool {
        let rev = other.reversed();
        all_permutations()
            .iter()
            .any(|p| {
                let r = self.relabel(p);
                r == *other || r == rev
            })
    }
}

fn all_permutations() -> &'static [[usize; NVARS]] {
    static PERMS: OnceLock<Vec<[usize; NVARS]>> = OnceLock::new();
    PERMS.get_or_init(|| {
        let mut out = Vec::with_capacity(720);
        let mut cur = [0usize; NVARS];
        fn rec(depth: usize, used: u32, cur: &mut [usize; NVARS], out: &mut Vec<[usize; NVARS]>) {
            if depth == NVARS {
                out.push(*cur);
                return;
            }
            for v in 0..NVARS {
                if used & (1 << v) == 0 {
                    cur[depth] = v;
                    rec(depth + 1, used | (1 << v), cur, out);
                }
            }
        }
        rec(0, 0, &mut cur, &mut out);
        out
    })
}

/// The four toric models of the dP3 quiver.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Model {
    One,
    Two,
    Three,
    Four,
}

impl Model {
    pub fn number(self) -> u8 {
        match self {
            Model::One => 1,
            Model::Two => 2,
            Model::Three => 3,
            Model::Four => 4,
        }
    }
}

/// One representative per model, found by walking toric mutations from the
/// initial quiver: each model first appears one step further out.
pub fn model_representatives() -> &'static [QuiverMatrix; 4] {
    static REPS: OnceLock<[QuiverMatrix; 4]> = OnceLock::new();
    REPS.get_or_init(|| {
        let mut reps = vec![QuiverMatrix::dp3()];
        let mut frontier = vec![QuiverMatrix::dp3()];
        while reps.len() < 4 {
            let mut next = Vec::new();
            for q in &frontier {
                for v in q.toric_vertices() {
                    let m = q.mutate(v).expect("valid vertex");
                    if !reps.iter().any(|r| r.equivalent(&m)) {
                        reps.push(m);
                        next.push(m);
                    }
                }
            }
            assert!(!next.is_empty(), "toric mutation classes exhausted early");
            frontier = next;
        }
        [reps[0], reps[1], reps[2], reps[3]]
    })
}

/// Which of Models 1-4 the quiver is, up to relabeling and global reversal.
pub fn classify_model(q: &QuiverMatrix) -> Option<Model> {
    let models = [Model::One, Model::Two, Model::Three, Model::Four];
    model_representatives()
        .iter()
        .zip(models)
        .find(|(r, _)| q.equivalent(r))
        .map(|(_, m)| m)
}

/// A labeled seed: quiver plus ordered cluster.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Seed {
    pub quiver: QuiverMatrix,
    pub cluster: [LaurentPoly; NVARS],
}

pub fn initial_seed() -> Seed {
    Seed {
        quiver: QuiverMatrix::dp3(),
        cluster: std::array::from_fn(|i| LaurentPoly::var(i + 1)),
    }
}

impl Seed {
    /// Cluster entry at 1-indexed vertex `v`.
    pub fn variable(&self, v: usize) -> &LaurentPoly {
        &self.cluster[v - 1]
    }

    pub fn is_toric(&self, v: usize) -> bool {
        self.quiver.is_toric(v)
    }

    /// Mutation at `v`: x'_v x_v = prod over arrows out of v + prod over arrows into v.
    pub fn mutate(&self, v: usize) -> Result<Seed, QuiverError> {
        let k = check_vertex(v)?;
        let row = &self.quiver.b[k];
        let mut out_prod = LaurentPoly::one();
        let mut in_prod = LaurentPoly::one();
        for (j, &bkj) in row.iter().enumerate() {
            if bkj > 0 {
                out_prod = out_prod.mul(&self.cluster[j].pow(bkj as u32));
            } else if bkj < 0 {
                in_prod = in_prod.mul(&self.cluster[j].pow((-bkj) as u32));
            }
        }
        let fresh = out_prod.add(&in_prod).div_exact(&self.cluster[k])?;
        let mut cluster = self.cluster.clone();
        cluster[k] = fresh;
        Ok(Seed {
            quiver: self.quiver.mutate(v)?,
            cluster,
        })
    }

    pub fn mutate_sequence(&self, word: &[usize]) -> Result<Seed, QuiverError> {
        word.iter().try_fold(self.clone(), |s, &v| s.mutate(v))
    }

    /// Position `i` of the result holds what was at position `perm[i]` (0-indexed).
    pub fn relabel(&self, perm: &[usize; NVARS]) -> Seed {
        Seed {
            quiver: self.quiver.relabel(perm),
            cluster: std::array::from_fn(|i| self.cluster[perm[i]].clone()),
        }
    }

    /// Plain-text form: six rows of the matrix, then six cluster polynomials.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn from_text(text: &str) -> Result<Seed, QuiverError> {
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.len() != 2 * NVARS {
            return Err(QuiverError::Parse(format!(
                "expected {} non-empty lines, found {}",
                2 * NVARS,
                lines.len()
            )));
        }
        let mut rows = [[0i32; NVARS]; NVARS];
        for (r, line) in lines[..NVARS].iter().enumerate() {
            let vals: Vec<i32> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| QuiverError::Parse(format!("bad integer {t:?}"))))
                .collect::<Result<_, _>>()?;
            if vals.len() != NVARS {
                return Err(QuiverError::Parse(format!("row {} has {} entries", r + 1, vals.len())));
            }
            rows[r].copy_from_slice(&vals);
        }
        let quiver = QuiverMatrix::from_rows(rows)?;
        let mut cluster: [LaurentPoly; NVARS] = Default::default();
        for (slot, line) in cluster.iter_mut().zip(&lines[NVARS..]) {
            *slot = line.parse()?;
        }
        Ok(Seed { quiver, cluster })
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.quiver.b {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        for p in &self.cluster {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }
}
