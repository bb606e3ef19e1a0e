//! AR-quiver data model, its textual file format, and the passage to
//! finitely presented abelian groups.
//!
//! A quiver lists the indecomposable maximal Cohen-Macaulay modules of a
//! ring of finite representation type as named vertices and its
//! Auslander-Reiten sequences as `left | middle ... | right` triples. The
//! group of the quiver is free on the vertices modulo one relation
//! `left - sum(middle) + right` per sequence.
//!
//! File format (UTF-8, line oriented, `#` starts a comment):
//!
//! ```text
//! quiver <name>
//! dim <nonnegative int>
//! gorenstein <true|false>
//! domain <true|false>
//! vertex <id> free=<0|1> [rank=<nonnegative int>]
//! seq <left> | <m1> <m2> ... | <right>     # empty middle written as -
//! end
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

use crate::abelian::{FPAbelianGroup, GroupHom, IntMatrix};

/// Errors from parsing or interrogating quivers.
#[derive(Debug, Clone, thiserror::Error)]
pub enum QuiverError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: duplicate vertex id '{id}'")]
    DuplicateVertex { line: usize, id: String },

    #[error("line {line}: unknown vertex '{id}'")]
    UnknownVertex { line: usize, id: String },

    #[error("line {line}: sequence endpoint '{id}' is a free vertex")]
    FreeEndpoint { line: usize, id: String },

    #[error("line {line}: rank additivity fails: {detail}")]
    RankAdditivity { line: usize, detail: String },

    #[error("quiver declares no vertices")]
    NoVertices,

    #[error("quiver '{quiver}' is not flagged as a domain")]
    NotADomain { quiver: String },

    #[error("quiver '{quiver}' has no rank for vertex '{vertex}'")]
    MissingRank { quiver: String, vertex: String },

    #[error("sub-presentation violates subset closure: {detail}")]
    SubsetViolation { detail: String },
}

impl QuiverError {
    /// True for malformed input text, false for violated semantic invariants.
    pub fn is_syntax(&self) -> bool {
        matches!(self, QuiverError::Syntax { .. })
    }
}

/// An indecomposable module, possibly free, with its generic rank when the
/// ring is a domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub is_free: bool,
    pub generic_rank: Option<u64>,
}

/// An AR sequence `0 -> left -> middle -> right -> 0`; the middle is a
/// multiset of vertex ids (repetition encodes multiplicity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArSequence {
    pub left: String,
    pub middle: Vec<String>,
    pub right: String,
}

/// A named AR quiver: vertices in declaration order plus AR sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArQuiver {
    pub name: String,
    pub dim: u64,
    pub is_gorenstein: bool,
    pub is_domain: bool,
    pub vertices: Vec<Vertex>,
    pub sequences: Vec<ArSequence>,
}

impl ArQuiver {
    /// Position of a vertex in declaration order.
    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn index_of(&self, id: &str) -> usize {
        self.vertex_index(id)
            .unwrap_or_else(|| panic!("unknown vertex '{id}' in quiver '{}'", self.name))
    }

    /// The group presented on the vertices (declaration order) with one
    /// relation `left - sum(middle) + right` per sequence.
    pub fn grothendieck_group(&self) -> FPAbelianGroup {
        let n = self.vertices.len();
        let mut rows = Vec::with_capacity(self.sequences.len());
        for seq in &self.sequences {
            let mut row = vec![BigInt::zero(); n];
            row[self.index_of(&seq.left)] += BigInt::one();
            for mid in &seq.middle {
                row[self.index_of(mid)] -= BigInt::one();
            }
            row[self.index_of(&seq.right)] += BigInt::one();
            rows.push(row);
        }
        let relations = if rows.is_empty() {
            IntMatrix::zero(0, n)
        } else {
            IntMatrix::from_rows(rows)
        };
        FPAbelianGroup::new(n, relations).expect("relation width matches vertex count")
    }

    /// Checks that generic rank is additive on every sequence, so that
    /// sending a vertex to its rank gives a well-defined surjection onto Z.
    ///
    /// Requires the domain flag and a rank on every vertex.
    pub fn check_rank_map(&self) -> Result<bool, QuiverError> {
        if !self.is_domain {
            return Err(QuiverError::NotADomain {
                quiver: self.name.clone(),
            });
        }
        let rank = |id: &str| -> Result<u128, QuiverError> {
            let v = self.vertex(id).unwrap_or_else(|| {
                panic!("unknown vertex '{id}' in quiver '{}'", self.name)
            });
            v.generic_rank
                .map(u128::from)
                .ok_or_else(|| QuiverError::MissingRank {
                    quiver: self.name.clone(),
                    vertex: v.id.clone(),
                })
        };
        for v in &self.vertices {
            rank(&v.id)?;
        }
        for seq in &self.sequences {
            let ends = rank(&seq.left)? + rank(&seq.right)?;
            let mut mid = 0u128;
            for m in &seq.middle {
                mid += rank(m)?;
            }
            if ends != mid {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A choice of vertices and sequences inside a quiver, presenting a group of
/// its own mapping into the full one.
#[derive(Clone, Debug)]
pub struct SubPresentation<'a> {
    pub quiver: &'a ArQuiver,
    pub vertex_subset: BTreeSet<String>,
    pub sequence_subset: BTreeSet<usize>,
}

impl<'a> SubPresentation<'a> {
    /// The sub-presentation using every vertex and every sequence.
    pub fn full(quiver: &'a ArQuiver) -> Self {
        SubPresentation {
            quiver,
            vertex_subset: quiver.vertices.iter().map(|v| v.id.clone()).collect(),
            sequence_subset: (0..quiver.sequences.len()).collect(),
        }
    }

    /// Verifies that selected sequences only touch selected vertices.
    pub fn validate(&self) -> Result<(), QuiverError> {
        for id in &self.vertex_subset {
            if self.quiver.vertex_index(id).is_none() {
                return Err(QuiverError::SubsetViolation {
                    detail: format!("vertex '{id}' is not in quiver '{}'", self.quiver.name),
                });
            }
        }
        for &idx in &self.sequence_subset {
            let Some(seq) = self.quiver.sequences.get(idx) else {
                return Err(QuiverError::SubsetViolation {
                    detail: format!(
                        "sequence index {idx} out of range for quiver '{}'",
                        self.quiver.name
                    ),
                });
            };
            for id in std::iter::once(&seq.left)
                .chain(seq.middle.iter())
                .chain(std::iter::once(&seq.right))
            {
                if !self.vertex_subset.contains(id) {
                    return Err(QuiverError::SubsetViolation {
                        detail: format!(
                            "sequence {idx} references vertex '{id}' outside the subset"
                        ),
                    });
                }
            }
        }
        Ok(())
    }

    /// Vertex indices of the subset, in quiver declaration order.
    fn selected_indices(&self) -> Vec<usize> {
        (0..self.quiver.vertices.len())
            .filter(|&i| self.vertex_subset.contains(&self.quiver.vertices[i].id))
            .collect()
    }

    /// The group presented on the selected vertices with the selected
    /// relations only.
    pub fn group(&self) -> Result<FPAbelianGroup, QuiverError> {
        self.validate()?;
        let selected = self.selected_indices();
        let pos_of = |id: &str| -> usize {
            let full = self.quiver.index_of(id);
            selected
                .iter()
                .position(|&i| i == full)
                .expect("subset closure already validated")
        };
        let n = selected.len();
        let mut rows = Vec::new();
        for &idx in &self.sequence_subset {
            let seq = &self.quiver.sequences[idx];
            let mut row = vec![BigInt::zero(); n];
            row[pos_of(&seq.left)] += BigInt::one();
            for mid in &seq.middle {
                row[pos_of(mid)] -= BigInt::one();
            }
            row[pos_of(&seq.right)] += BigInt::one();
            rows.push(row);
        }
        let relations = if rows.is_empty() {
            IntMatrix::zero(0, n)
        } else {
            IntMatrix::from_rows(rows)
        };
        Ok(FPAbelianGroup::new(n, relations).expect("relation width matches subset size"))
    }

    /// The map from the sub-presentation's group to the full group induced
    /// by inclusion of generators. Always well-defined, since every selected
    /// relation is a relation of the full group.
    pub fn alpha_map(&self) -> Result<GroupHom, QuiverError> {
        let sub = self.group()?;
        let full = self.quiver.grothendieck_group();
        let selected = self.selected_indices();
        let mut matrix = IntMatrix::zero(full.n_generators(), sub.n_generators());
        for (col, &row) in selected.iter().enumerate() {
            matrix[(row, col)] = BigInt::one();
        }
        Ok(GroupHom::new(sub, full, matrix).expect("inclusion matrix has the right shape"))
    }
}

/// Parses the quiver file format, verifying every structural invariant:
/// unique vertex ids, resolvable references, non-free sequence endpoints,
/// and rank additivity when the quiver is a domain with full rank data.
pub fn parse_quiver(text: &str) -> Result<ArQuiver, QuiverError> {
    let lines = logical_lines(text);
    let mut it = lines.iter().peekable();

    let (header_line, header) = it.next().ok_or(QuiverError::Syntax {
        line: 1,
        message: "expected 'quiver <name>' header".into(),
    })?;
    let name = parse_header(*header_line, header, "quiver")?;

    let mut dim: Option<u64> = None;
    let mut gorenstein: Option<bool> = None;
    let mut domain: Option<bool> = None;
    let mut vertices: Vec<Vertex> = Vec::new();
    let mut vertex_lines: Vec<usize> = Vec::new();
    let mut pending: Vec<(usize, ArSequence)> = Vec::new();
    let mut end_line: Option<usize> = None;

    for (line, content) in it {
        if end_line.is_some() {
            return Err(QuiverError::Syntax {
                line: *line,
                message: "content after 'end'".into(),
            });
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "dim" => set_once(*line, "dim", &mut dim, parse_scalar(*line, &tokens)?)?,
            "gorenstein" => {
                set_once(*line, "gorenstein", &mut gorenstein, parse_flag(*line, &tokens)?)?
            }
            "domain" => set_once(*line, "domain", &mut domain, parse_flag(*line, &tokens)?)?,
            "vertex" => {
                let vertex = parse_vertex(*line, &tokens)?;
                if vertices.iter().any(|v| v.id == vertex.id) {
                    return Err(QuiverError::DuplicateVertex {
                        line: *line,
                        id: vertex.id,
                    });
                }
                vertices.push(vertex);
                vertex_lines.push(*line);
            }
            "seq" => pending.push((*line, parse_sequence(*line, &tokens)?)),
            "end" => {
                expect_len(*line, &tokens, 1)?;
                end_line = Some(*line);
            }
            other => {
                return Err(QuiverError::Syntax {
                    line: *line,
                    message: format!("unknown directive '{other}'"),
                })
            }
        }
    }

    let end_line = end_line.ok_or_else(|| QuiverError::Syntax {
        line: lines.last().map_or(1, |(l, _)| *l),
        message: "missing 'end'".into(),
    })?;
    fn require<T>(field: Option<T>, name: &str, line: usize) -> Result<T, QuiverError> {
        field.ok_or_else(|| QuiverError::Syntax {
            line,
            message: format!("missing '{name}' directive"),
        })
    }
    let quiver = ArQuiver {
        name,
        dim: require(dim, "dim", end_line)?,
        is_gorenstein: require(gorenstein, "gorenstein", end_line)?,
        is_domain: require(domain, "domain", end_line)?,
        vertices,
        sequences: pending.iter().map(|(_, s)| s.clone()).collect(),
    };

    if quiver.vertices.is_empty() {
        return Err(QuiverError::NoVertices);
    }
    for (line, seq) in &pending {
        for id in std::iter::once(&seq.left)
            .chain(seq.middle.iter())
            .chain(std::iter::once(&seq.right))
        {
            if quiver.vertex_index(id).is_none() {
                return Err(QuiverError::UnknownVertex {
                    line: *line,
                    id: id.clone(),
                });
            }
        }
        for id in [&seq.left, &seq.right] {
            if quiver.vertex(id).expect("checked above").is_free {
                return Err(QuiverError::FreeEndpoint {
                    line: *line,
                    id: id.clone(),
                });
            }
        }
    }
    if quiver.is_domain && quiver.vertices.iter().all(|v| v.generic_rank.is_some()) {
        for (line, seq) in &pending {
            let rank =
                |id: &str| u128::from(quiver.vertex(id).unwrap().generic_rank.unwrap());
            let ends = rank(&seq.left) + rank(&seq.right);
            let mid: u128 = seq.middle.iter().map(|m| rank(m)).sum();
            if ends != mid {
                return Err(QuiverError::RankAdditivity {
                    line: *line,
                    detail: format!(
                        "rank({}) + rank({}) = {ends} but the middle ranks sum to {mid}",
                        seq.left, seq.right
                    ),
                });
            }
        }
    }
    Ok(quiver)
}

/// Strips comments and blank lines, keeping 1-based line numbers.
pub(crate) fn logical_lines(text: &str) -> Vec<(usize, String)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let stripped = raw.split('#').next().unwrap_or("").trim();
            (!stripped.is_empty()).then(|| (i + 1, stripped.to_string()))
        })
        .collect()
}

pub(crate) fn parse_header(
    line: usize,
    content: &str,
    keyword: &str,
) -> Result<String, QuiverError> {
    let tokens: Vec<&str> = content.split_whitespace().collect();
    if tokens.len() != 2 || tokens[0] != keyword {
        return Err(QuiverError::Syntax {
            line,
            message: format!("expected '{keyword} <name>'"),
        });
    }
    Ok(tokens[1].to_string())
}

fn expect_len(line: usize, tokens: &[&str], len: usize) -> Result<(), QuiverError> {
    if tokens.len() != len {
        return Err(QuiverError::Syntax {
            line,
            message: format!("unexpected tokens after '{}'", tokens[0]),
        });
    }
    Ok(())
}

fn set_once<T>(line: usize, name: &str, slot: &mut Option<T>, value: T) -> Result<(), QuiverError> {
    if slot.is_some() {
        return Err(QuiverError::Syntax {
            line,
            message: format!("duplicate '{name}' directive"),
        });
    }
    *slot = Some(value);
    Ok(())
}

fn parse_scalar(line: usize, tokens: &[&str]) -> Result<u64, QuiverError> {
    expect_len(line, &tokens[1..], 1).map_err(|_| QuiverError::Syntax {
        line,
        message: format!("expected '{} <nonnegative int>'", tokens[0]),
    })?;
    tokens[1].parse().map_err(|_| QuiverError::Syntax {
        line,
        message: format!("'{}' is not a nonnegative integer", tokens[1]),
    })
}

fn parse_flag(line: usize, tokens: &[&str]) -> Result<bool, QuiverError> {
    if tokens.len() != 2 {
        return Err(QuiverError::Syntax {
            line,
            message: format!("expected '{} <true|false>'", tokens[0]),
        });
    }
    match tokens[1] {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(QuiverError::Syntax {
            line,
            message: format!("expected 'true' or 'false', found '{other}'"),
        }),
    }
}

fn parse_vertex(line: usize, tokens: &[&str]) -> Result<Vertex, QuiverError> {
    if tokens.len() < 3 {
        return Err(QuiverError::Syntax {
            line,
            message: "expected 'vertex <id> free=<0|1> [rank=<int>]'".into(),
        });
    }
    let id = tokens[1];
    if id == "-" || id.contains('|') {
        return Err(QuiverError::Syntax {
            line,
            message: format!("invalid vertex id '{id}'"),
        });
    }
    let mut is_free: Option<bool> = None;
    let mut rank: Option<u64> = None;
    for token in &tokens[2..] {
        match token.split_once('=') {
            Some(("free", v)) => {
                let flag = match v {
                    "0" => false,
                    "1" => true,
                    _ => {
                        return Err(QuiverError::Syntax {
                            line,
                            message: format!("free must be 0 or 1, found '{v}'"),
                        })
                    }
                };
                set_once(line, "free", &mut is_free, flag)?;
            }
            Some(("rank", v)) => {
                let value = v.parse().map_err(|_| QuiverError::Syntax {
                    line,
                    message: format!("rank must be a nonnegative integer, found '{v}'"),
                })?;
                set_once(line, "rank", &mut rank, value)?;
            }
            _ => {
                return Err(QuiverError::Syntax {
                    line,
                    message: format!("unexpected token '{token}' in vertex declaration"),
                })
            }
        }
    }
    let is_free = is_free.ok_or_else(|| QuiverError::Syntax {
        line,
        message: "vertex declaration is missing 'free='".into(),
    })?;
    Ok(Vertex {
        id: id.to_string(),
        is_free,
        generic_rank: rank,
    })
}

fn parse_sequence(line: usize, tokens: &[&str]) -> Result<ArSequence, QuiverError> {
    let body = &tokens[1..];
    let pipes: Vec<usize> = body
        .iter()
        .enumerate()
        .filter_map(|(i, t)| (*t == "|").then_some(i))
        .collect();
    let [first, second] = pipes.as_slice() else {
        return Err(QuiverError::Syntax {
            line,
            message: "expected 'seq <left> | <middle...> | <right>'".into(),
        });
    };
    let left = &body[..*first];
    let middle = &body[first + 1..*second];
    let right = &body[second + 1..];
    if left.len() != 1 || right.len() != 1 || middle.is_empty() {
        return Err(QuiverError::Syntax {
            line,
            message: "expected 'seq <left> | <middle...> | <right>'".into(),
        });
    }
    let middle: Vec<String> = if middle == ["-"] {
        Vec::new()
    } else if middle.contains(&"-") {
        return Err(QuiverError::Syntax {
            line,
            message: "'-' denotes an empty middle and must stand alone".into(),
        });
    } else {
        middle.iter().map(|s| s.to_string()).collect()
    };
    Ok(ArSequence {
        left: left[0].to_string(),
        middle,
        right: right[0].to_string(),
    })
}
