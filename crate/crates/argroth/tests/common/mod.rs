//! Shared helpers and independent oracles for the test suites.
//!
//! The oracles here deliberately avoid the library's Smith normal form
//! path: determinants go through cofactor expansion and invariant factors
//! through gcds of minors, so that agreement between the two routes is
//! evidence rather than tautology.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use argroth::abelian::IntMatrix;

/// Workspace-level catalog directory shipped with the repository.
pub fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root exists")
}

pub fn catalog_dir() -> PathBuf {
    workspace_root().join("catalog")
}

/// Runs the CLI from the workspace root so relative catalog paths work.
pub fn run_argroth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_argroth"))
        .args(args)
        .current_dir(workspace_root())
        .output()
        .expect("binary runs")
}

pub fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is UTF-8")
}

pub fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is UTF-8")
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut det = BigInt::zero();
    for j in 0..n {
        if m[(0, j)].is_zero() {
            continue;
        }
        let mut sub = IntMatrix::zero(n - 1, n - 1);
        for i in 1..n {
            let mut c = 0;
            for jj in 0..n {
                if jj == j {
                    continue;
                }
                sub[(i - 1, c)] = m[(i, jj)].clone();
                c += 1;
            }
        }
        let term = &m[(0, j)] * cofactor_det(&sub);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if k > n {
        return vec![];
    }
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // advance the lexicographically smallest position that can move
        let mut i = k;
        while i > 0 {
            i -= 1;
            if current[i] != i + n - k {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

fn minor(m: &IntMatrix, rows: &[usize], cols: &[usize]) -> BigInt {
    let k = rows.len();
    let mut sub = IntMatrix::zero(k, k);
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            sub[(i, j)] = m[(r, c)].clone();
        }
    }
    cofactor_det(&sub)
}

/// Invariant factors of `a` from the gcds of its minors: the product of the
/// first `k` factors is the gcd of all `k x k` minors.
pub fn minor_gcd_invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    let max_k = a.rows().min(a.cols());
    let mut factors = Vec::new();
    let mut previous = BigInt::one();
    for k in 1..=max_k {
        let mut g = BigInt::zero();
        for rows in combinations(a.rows(), k) {
            for cols in combinations(a.cols(), k) {
                g = g.gcd(&minor(a, &rows, &cols));
            }
        }
        if g.is_zero() {
            break;
        }
        factors.push(&g / &previous);
        previous = g;
    }
    factors
}

/// Exhaustive lattice membership over coefficient vectors bounded by
/// `bound` in absolute value. Only sound as a positive oracle: a `false`
/// answer may just mean the needed coefficients are larger than the bound.
pub fn brute_force_in_row_lattice(basis: &IntMatrix, x: &[BigInt], bound: i64) -> bool {
    assert_eq!(basis.cols(), x.len());
    let k = basis.rows();
    if k == 0 {
        return x.iter().all(Zero::is_zero);
    }
    let mut coeffs = vec![-bound; k];
    loop {
        let mut candidate = vec![BigInt::zero(); basis.cols()];
        for (i, c) in coeffs.iter().enumerate() {
            for j in 0..basis.cols() {
                candidate[j] += BigInt::from(*c) * &basis[(i, j)];
            }
        }
        if candidate == x {
            return true;
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return false;
            }
            if coeffs[pos] < bound {
                coeffs[pos] += 1;
                break;
            }
            coeffs[pos] = -bound;
            pos += 1;
        }
    }
}
