//! Extension-of-scalars data between two quivers and the maps it induces on
//! their groups.
//!
//! A decomposition table records, for each indecomposable over the base,
//! the multiplicities of the indecomposables its extension of scalars splits
//! into; optionally it also records the multiplicities under restriction of
//! scalars. The tables are input data: existence of such decompositions is a
//! theorem, but nothing here computes them from ring presentations.
//!
//! Table file format (UTF-8, line oriented, `#` starts a comment):
//!
//! ```text
//! basechange <name>
//! from <quiver-name>
//! to <quiver-name>
//! degree <positive int>
//! extend <src-id> -> <tgt-id>[*<mult>] <tgt-id>[*<mult>] ...
//! restrict <tgt-id> -> <src-id>[*<mult>] ...     # optional block
//! end
//! ```
//!
//! System file format:
//!
//! ```text
//! system <name>
//! stage <quiver-file>          # repeated, in order; the last stage is T
//! table <basechange-file>      # repeated, one per consecutive pair
//! stabilized <true|false>
//! end
//! ```

use num_bigint::BigInt;
use std::collections::BTreeMap;

use crate::abelian::{self, FPAbelianGroup, GroupDiagram, GroupHom, GroupInvariants, IntMatrix};
use crate::quiver::{logical_lines, parse_header, ArQuiver};

/// Errors from tables, systems, and the maps they induce.
#[derive(Debug, Clone, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("table '{table}' declares {role} quiver '{declared}' but was given '{given}'")]
    NameMismatch {
        table: String,
        role: &'static str,
        declared: String,
        given: String,
    },

    #[error("table '{table}' references unknown vertex '{id}' of quiver '{quiver}'")]
    UnknownVertex {
        table: String,
        id: String,
        quiver: String,
    },

    #[error("table '{table}' has no extend entry for vertex '{id}'")]
    MissingExtend { table: String, id: String },

    #[error("table '{table}' has no restrict entry for vertex '{id}'")]
    MissingRestrict { table: String, id: String },

    #[error("table '{table}' maps vertex '{id}' to an empty decomposition")]
    EmptyImage { table: String, id: String },

    #[error("table '{table}' violates free base change: {detail}")]
    FreeImage { table: String, detail: String },

    #[error(
        "table '{table}' violates the transfer identity: \
         restrict o extend != {degree} x identity"
    )]
    DeltaViolation { table: String, degree: u64 },

    #[error("table '{table}' carries no restriction data")]
    RestrictAbsent { table: String },

    #[error("table '{table}' does not induce a well-defined map: {detail}")]
    IllDefinedHom { table: String, detail: String },

    #[error(
        "system '{system}' is not marked stabilized: without the assertion that every \
         indecomposable and every AR sequence of the final stage already comes from some \
         finite stage, the isomorphism check does not apply"
    )]
    NotStabilized { system: String },

    #[error("invalid system: {detail}")]
    StageMismatch { detail: String },

    #[error(transparent)]
    Abelian(#[from] abelian::Error),
}

impl TableError {
    pub fn is_syntax(&self) -> bool {
        matches!(self, TableError::Syntax { .. })
    }
}

/// Multiplicities of indecomposable summands, keyed by vertex id.
pub type Multiset = BTreeMap<String, u64>;

/// Extension-of-scalars multiplicities between two quivers, with optional
/// restriction-of-scalars data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionTable {
    pub name: String,
    pub from_quiver: String,
    pub to_quiver: String,
    /// Rank of the extension as a module over the base.
    pub degree: u64,
    pub extend: BTreeMap<String, Multiset>,
    pub restrict: Option<BTreeMap<String, Multiset>>,
}

impl DecompositionTable {
    /// Checks the extension half of the table against the two quivers:
    /// matching names, totality, nonempty images, resolvable ids, and the
    /// free vertex landing on the free vertex with multiplicity one.
    pub fn validate_extend(&self, qf: &ArQuiver, qe: &ArQuiver) -> Result<(), TableError> {
        self.check_names(qf, qe)?;
        check_map_shape(&self.name, &self.extend, qf, qe)?;
        for v in qf.vertices.iter().filter(|v| v.is_free) {
            let image = &self.extend[&v.id];
            let sole = (image.len() == 1).then(|| image.iter().next().unwrap());
            let ok = sole.is_some_and(|(id, &mult)| {
                mult == 1 && qe.vertex(id).is_some_and(|w| w.is_free)
            });
            if !ok {
                return Err(TableError::FreeImage {
                    table: self.name.clone(),
                    detail: format!(
                        "free vertex '{}' must extend to the free vertex of '{}' with \
                         multiplicity 1",
                        v.id, qe.name
                    ),
                });
            }
        }
        Ok(())
    }

    /// Checks the restriction half: presence, totality on the target
    /// vertices, and resolvable ids.
    pub fn validate_restrict(&self, qf: &ArQuiver, qe: &ArQuiver) -> Result<(), TableError> {
        self.check_names(qf, qe)?;
        let restrict = self.restrict.as_ref().ok_or_else(|| TableError::RestrictAbsent {
            table: self.name.clone(),
        })?;
        check_map_shape(&self.name, restrict, qe, qf).map_err(|e| match e {
            TableError::MissingExtend { table, id } => TableError::MissingRestrict { table, id },
            other => other,
        })
    }

    /// Full load-time validation; when restriction data is present the
    /// composite must be exactly `degree x identity`.
    pub fn validate(&self, qf: &ArQuiver, qe: &ArQuiver) -> Result<(), TableError> {
        self.validate_extend(qf, qe)?;
        if self.restrict.is_some() {
            self.validate_restrict(qf, qe)?;
            if !self.check_delta(qf, qe)? {
                return Err(TableError::DeltaViolation {
                    table: self.name.clone(),
                    degree: self.degree,
                });
            }
        }
        Ok(())
    }

    fn check_names(&self, qf: &ArQuiver, qe: &ArQuiver) -> Result<(), TableError> {
        if self.from_quiver != qf.name {
            return Err(TableError::NameMismatch {
                table: self.name.clone(),
                role: "from",
                declared: self.from_quiver.clone(),
                given: qf.name.clone(),
            });
        }
        if self.to_quiver != qe.name {
            return Err(TableError::NameMismatch {
                table: self.name.clone(),
                role: "to",
                declared: self.to_quiver.clone(),
                given: qe.name.clone(),
            });
        }
        Ok(())
    }

    /// The extension multiplicities as a matrix: column per source vertex,
    /// row per target vertex.
    pub fn extend_matrix(&self, qf: &ArQuiver, qe: &ArQuiver) -> IntMatrix {
        multiset_matrix(&self.extend, qf, qe)
    }

    /// The restriction multiplicities as a matrix: column per target vertex,
    /// row per source vertex.
    pub fn restrict_matrix(&self, qf: &ArQuiver, qe: &ArQuiver) -> Option<IntMatrix> {
        self.restrict.as_ref().map(|r| multiset_matrix(r, qe, qf))
    }

    /// The map on groups induced by extension of scalars.
    ///
    /// Fails if some AR relation of the source does not land in the relation
    /// lattice of the target; the error names the offending relation.
    pub fn induced_hom(&self, qf: &ArQuiver, qe: &ArQuiver) -> Result<GroupHom, TableError> {
        self.validate_extend(qf, qe)?;
        let hom = GroupHom::new(
            qf.grothendieck_group(),
            qe.grothendieck_group(),
            self.extend_matrix(qf, qe),
        )?;
        self.reject_ill_defined(hom, qf, qe)
    }

    /// The transfer map on groups induced by restriction of scalars.
    pub fn transfer_hom(&self, qf: &ArQuiver, qe: &ArQuiver) -> Result<GroupHom, TableError> {
        self.validate_restrict(qf, qe)?;
        let matrix = self.restrict_matrix(qf, qe).expect("validated above");
        let hom = GroupHom::new(qe.grothendieck_group(), qf.grothendieck_group(), matrix)?;
        self.reject_ill_defined(hom, qe, qf)
    }

    fn reject_ill_defined(
        &self,
        hom: GroupHom,
        src_quiver: &ArQuiver,
        tgt_quiver: &ArQuiver,
    ) -> Result<GroupHom, TableError> {
        if let Some(i) = hom.offending_relation() {
            let relation = hom.source().relations().row(i);
            let image = hom.matrix().mul_vec(relation);
            return Err(TableError::IllDefinedHom {
                table: self.name.clone(),
                detail: format!(
                    "sequence {i} of '{}' gives the relation {}, whose image {} is not in \
                     the relation lattice of '{}'",
                    src_quiver.name,
                    format_combination(relation, src_quiver),
                    format_combination(&image, tgt_quiver),
                    tgt_quiver.name,
                ),
            });
        }
        Ok(hom)
    }

    /// True iff `restrict o extend` equals `degree x identity` on the
    /// source vertices, the composite that forces the rationalized extension
    /// map to be injective.
    pub fn check_delta(&self, qf: &ArQuiver, qe: &ArQuiver) -> Result<bool, TableError> {
        self.validate_extend(qf, qe)?;
        self.validate_restrict(qf, qe)?;
        let extend = self.extend_matrix(qf, qe);
        let restrict = self.restrict_matrix(qf, qe).expect("validated above");
        let scaled_identity =
            IntMatrix::identity(qf.vertices.len()).scaled(&BigInt::from(self.degree));
        Ok(restrict.mul(&extend) == scaled_identity)
    }

    /// The table of the composite base change `self` then `next`.
    ///
    /// Extension multiplicities multiply through the middle stage; so do
    /// restriction multiplicities when both tables carry them. The degree of
    /// the composite is the product of the degrees.
    pub fn compose(&self, next: &DecompositionTable) -> Result<DecompositionTable, TableError> {
        if self.to_quiver != next.from_quiver {
            return Err(TableError::StageMismatch {
                detail: format!(
                    "cannot compose '{}' (to '{}') with '{}' (from '{}')",
                    self.name, self.to_quiver, next.name, next.from_quiver
                ),
            });
        }
        let degree = self
            .degree
            .checked_mul(next.degree)
            .ok_or_else(|| TableError::StageMismatch {
                detail: "composite degree overflows".into(),
            })?;
        let compose_maps = |first: &BTreeMap<String, Multiset>,
                            second: &BTreeMap<String, Multiset>|
         -> Result<BTreeMap<String, Multiset>, TableError> {
            let mut out: BTreeMap<String, Multiset> = BTreeMap::new();
            for (src, image) in first {
                let mut acc: Multiset = BTreeMap::new();
                for (mid, k1) in image {
                    let through =
                        second.get(mid).ok_or_else(|| TableError::MissingExtend {
                            table: next.name.clone(),
                            id: mid.clone(),
                        })?;
                    for (tgt, k2) in through {
                        *acc.entry(tgt.clone()).or_insert(0) += k1 * k2;
                    }
                }
                out.insert(src.clone(), acc);
            }
            Ok(out)
        };
        let extend = compose_maps(&self.extend, &next.extend)?;
        let restrict = match (&self.restrict, &next.restrict) {
            (Some(r1), Some(r2)) => Some(compose_maps(r2, r1)?),
            _ => None,
        };
        Ok(DecompositionTable {
            name: format!("{}~{}", self.name, next.name),
            from_quiver: self.from_quiver.clone(),
            to_quiver: next.to_quiver.clone(),
            degree,
            extend,
            restrict,
        })
    }
}

fn check_map_shape(
    table: &str,
    map: &BTreeMap<String, Multiset>,
    keys: &ArQuiver,
    values: &ArQuiver,
) -> Result<(), TableError> {
    for id in map.keys() {
        if keys.vertex_index(id).is_none() {
            return Err(TableError::UnknownVertex {
                table: table.to_string(),
                id: id.clone(),
                quiver: keys.name.clone(),
            });
        }
    }
    for v in &keys.vertices {
        let Some(image) = map.get(&v.id) else {
            return Err(TableError::MissingExtend {
                table: table.to_string(),
                id: v.id.clone(),
            });
        };
        if image.values().all(|&m| m == 0) {
            return Err(TableError::EmptyImage {
                table: table.to_string(),
                id: v.id.clone(),
            });
        }
        for id in image.keys() {
            if values.vertex_index(id).is_none() {
                return Err(TableError::UnknownVertex {
                    table: table.to_string(),
                    id: id.clone(),
                    quiver: values.name.clone(),
                });
            }
        }
    }
    Ok(())
}

fn multiset_matrix(
    map: &BTreeMap<String, Multiset>,
    col_quiver: &ArQuiver,
    row_quiver: &ArQuiver,
) -> IntMatrix {
    let mut m = IntMatrix::zero(row_quiver.vertices.len(), col_quiver.vertices.len());
    for (src, image) in map {
        let col = col_quiver
            .vertex_index(src)
            .expect("table validated against quivers");
        for (tgt, mult) in image {
            let row = row_quiver
                .vertex_index(tgt)
                .expect("table validated against quivers");
            m[(row, col)] = BigInt::from(*mult);
        }
    }
    m
}

/// Renders an integer combination of vertices, e.g. `-2*R + 2*M`.
fn format_combination(coefficients: &[BigInt], quiver: &ArQuiver) -> String {
    use num_traits::Zero;
    let mut parts = Vec::new();
    for (coefficient, vertex) in coefficients.iter().zip(&quiver.vertices) {
        if coefficient.is_zero() {
            continue;
        }
        let term = format!("{}*{}", coefficient, vertex.id);
        if parts.is_empty() {
            parts.push(term);
        } else if term.starts_with('-') {
            parts.push(format!("- {}", &term[1..]));
        } else {
            parts.push(format!("+ {term}"));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

/// Verdict on injectivity of the rationalized extension map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectivityVerdict {
    /// Established through the transfer identity.
    Injective,
    /// No restriction data, so nothing is claimed.
    NotEstablished,
    /// Restriction data present but the transfer identity failed.
    Undetermined,
}

/// Status of the transfer identity check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltaStatus {
    Passed,
    Failed,
    NoRestrictData,
}

/// Side-by-side comparison of the groups at both ends of a base change.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub source_quiver: String,
    pub target_quiver: String,
    pub degree: u64,
    pub source: GroupInvariants,
    pub target: GroupInvariants,
    pub delta: DeltaStatus,
    pub eta_injective: InjectivityVerdict,
    /// True when the source has strictly smaller rational rank.
    pub proper_subspace: bool,
}

/// Compares source and target groups of a table: rational ranks, torsion
/// lists, and what the transfer identity says about injectivity of the
/// rationalized extension map.
pub fn compare_torsion_and_rank(
    table: &DecompositionTable,
    qf: &ArQuiver,
    qe: &ArQuiver,
) -> Result<ComparisonReport, TableError> {
    let eta = table.induced_hom(qf, qe)?;
    let source = eta.source().invariants();
    let target = eta.target().invariants();
    let (delta, eta_injective) = if table.restrict.is_none() {
        (DeltaStatus::NoRestrictData, InjectivityVerdict::NotEstablished)
    } else if table.check_delta(qf, qe)? {
        (DeltaStatus::Passed, InjectivityVerdict::Injective)
    } else {
        (DeltaStatus::Failed, InjectivityVerdict::Undetermined)
    };
    Ok(ComparisonReport {
        source_quiver: qf.name.clone(),
        target_quiver: qe.name.clone(),
        degree: table.degree,
        proper_subspace: source.free_rank < target.free_rank,
        source,
        target,
        delta,
        eta_injective,
    })
}

/// A finite chain of quivers and tables; the last quiver is the terminal
/// stage `T`. `stabilized` asserts that every indecomposable and every AR
/// sequence of `T` is already defined at some finite stage.
#[derive(Clone, Debug)]
pub struct DirectSystem {
    pub name: String,
    pub quivers: Vec<ArQuiver>,
    pub tables: Vec<DecompositionTable>,
    pub stabilized: bool,
}

/// Exact verdicts on the canonical map from the colimit to the terminal
/// group.
#[derive(Clone, Debug)]
pub struct XiReport {
    pub colimit: GroupInvariants,
    pub terminal: GroupInvariants,
    pub matrix: IntMatrix,
    pub injective: bool,
    pub surjective: bool,
    pub isomorphism: bool,
}

impl DirectSystem {
    /// Validates stage/table counts and every table against its pair of
    /// consecutive quivers.
    pub fn new(
        name: String,
        quivers: Vec<ArQuiver>,
        tables: Vec<DecompositionTable>,
        stabilized: bool,
    ) -> Result<Self, TableError> {
        if quivers.is_empty() {
            return Err(TableError::StageMismatch {
                detail: "a system needs at least one stage".into(),
            });
        }
        if tables.len() + 1 != quivers.len() {
            return Err(TableError::StageMismatch {
                detail: format!(
                    "{} stages need {} tables, found {}",
                    quivers.len(),
                    quivers.len() - 1,
                    tables.len()
                ),
            });
        }
        for (i, table) in tables.iter().enumerate() {
            table.validate(&quivers[i], &quivers[i + 1])?;
        }
        Ok(DirectSystem {
            name,
            quivers,
            tables,
            stabilized,
        })
    }

    /// The designated terminal quiver.
    pub fn terminal(&self) -> &ArQuiver {
        self.quivers.last().expect("a system has at least one stage")
    }

    /// Colimit of the chain of groups, with the canonical map from each
    /// stage.
    pub fn colimit(&self) -> Result<(FPAbelianGroup, Vec<GroupHom>), TableError> {
        let groups: Vec<FPAbelianGroup> = self
            .quivers
            .iter()
            .map(ArQuiver::grothendieck_group)
            .collect();
        let homs = self
            .tables
            .iter()
            .enumerate()
            .map(|(i, t)| t.induced_hom(&self.quivers[i], &self.quivers[i + 1]))
            .collect::<Result<Vec<_>, _>>()?;
        let diagram = GroupDiagram::chain(groups, homs)?;
        Ok(diagram.colimit())
    }

    /// The canonical map from the colimit to the terminal group: on the
    /// block of stage `i` it is the composite of the extension matrices from
    /// stage `i` to the end.
    pub fn xi_hom(&self) -> Result<GroupHom, TableError> {
        let (colimit, _) = self.colimit()?;
        let terminal_group = self.terminal().grothendieck_group();
        let last = self.quivers.len() - 1;
        let mut composite = IntMatrix::identity(terminal_group.n_generators());
        let mut blocks: Vec<IntMatrix> = vec![composite.clone()];
        for i in (0..last).rev() {
            composite = composite.mul(&self.tables[i].extend_matrix(
                &self.quivers[i],
                &self.quivers[i + 1],
            ));
            blocks.push(composite.clone());
        }
        blocks.reverse();
        let matrix = blocks
            .into_iter()
            .reduce(|acc, b| acc.hstack(&b))
            .expect("at least one stage");
        let hom = GroupHom::new(colimit, terminal_group, matrix)?;
        debug_assert!(hom.is_well_defined());
        Ok(hom)
    }

    /// Exact isomorphism check for the colimit map.
    ///
    /// Refuses to run unless the system asserts stabilization, since the
    /// verdicts are meaningless when the terminal stage can still grow.
    pub fn check_xi_iso(&self) -> Result<XiReport, TableError> {
        if !self.stabilized {
            return Err(TableError::NotStabilized {
                system: self.name.clone(),
            });
        }
        let xi = self.xi_hom()?;
        let injective = xi.is_injective();
        let surjective = xi.is_surjective();
        Ok(XiReport {
            colimit: xi.source().invariants(),
            terminal: xi.target().invariants(),
            matrix: xi.matrix().clone(),
            injective,
            surjective,
            isomorphism: injective && surjective,
        })
    }
}

/// Parses the table file format.
pub fn parse_table(text: &str) -> Result<DecompositionTable, TableError> {
    let lines = logical_lines(text);
    let mut it = lines.iter();
    let (header_line, header) = it.next().ok_or(TableError::Syntax {
        line: 1,
        message: "expected 'basechange <name>' header".into(),
    })?;
    let name = parse_header(*header_line, header, "basechange").map_err(from_quiver_syntax)?;

    let mut from: Option<String> = None;
    let mut to: Option<String> = None;
    let mut degree: Option<u64> = None;
    let mut extend: BTreeMap<String, Multiset> = BTreeMap::new();
    let mut restrict: BTreeMap<String, Multiset> = BTreeMap::new();
    let mut saw_restrict = false;
    let mut end_line: Option<usize> = None;

    for (line, content) in it {
        if end_line.is_some() {
            return Err(TableError::Syntax {
                line: *line,
                message: "content after 'end'".into(),
            });
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens[0] {
            "from" => set_name(*line, "from", &mut from, &tokens)?,
            "to" => set_name(*line, "to", &mut to, &tokens)?,
            "degree" => {
                let value: u64 = single_value(*line, &tokens)?
                    .parse()
                    .map_err(|_| TableError::Syntax {
                        line: *line,
                        message: format!("'{}' is not a positive integer", tokens[1]),
                    })?;
                if value == 0 {
                    return Err(TableError::Syntax {
                        line: *line,
                        message: "degree must be positive".into(),
                    });
                }
                if degree.replace(value).is_some() {
                    return Err(TableError::Syntax {
                        line: *line,
                        message: "duplicate 'degree' directive".into(),
                    });
                }
            }
            "extend" => parse_mapping_line(*line, &tokens, &mut extend)?,
            "restrict" => {
                saw_restrict = true;
                parse_mapping_line(*line, &tokens, &mut restrict)?;
            }
            "end" => {
                if tokens.len() != 1 {
                    return Err(TableError::Syntax {
                        line: *line,
                        message: "unexpected tokens after 'end'".into(),
                    });
                }
                end_line = Some(*line);
            }
            other => {
                return Err(TableError::Syntax {
                    line: *line,
                    message: format!("unknown directive '{other}'"),
                })
            }
        }
    }

    let end_line = end_line.ok_or_else(|| TableError::Syntax {
        line: lines.last().map_or(1, |(l, _)| *l),
        message: "missing 'end'".into(),
    })?;
    fn require<T>(field: Option<T>, what: &str, line: usize) -> Result<T, TableError> {
        field.ok_or_else(|| TableError::Syntax {
            line,
            message: format!("missing '{what}' directive"),
        })
    }
    Ok(DecompositionTable {
        name,
        from_quiver: require(from, "from", end_line)?,
        to_quiver: require(to, "to", end_line)?,
        degree: require(degree, "degree", end_line)?,
        extend,
        restrict: saw_restrict.then_some(restrict),
    })
}

/// Stage and table file names of a system, before any file is loaded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemSpec {
    pub name: String,
    pub stage_files: Vec<String>,
    pub table_files: Vec<String>,
    pub stabilized: bool,
}

/// Parses the system file format.
pub fn parse_system(text: &str) -> Result<SystemSpec, TableError> {
    let lines = logical_lines(text);
    let mut it = lines.iter();
    let (header_line, header) = it.next().ok_or(TableError::Syntax {
        line: 1,
        message: "expected 'system <name>' header".into(),
    })?;
    let name = parse_header(*header_line, header, "system").map_err(from_quiver_syntax)?;

    let mut stage_files = Vec::new();
    let mut table_files = Vec::new();
    let mut stabilized: Option<bool> = None;
    let mut end_line: Option<usize> = None;

    for (line, content) in it {
        if end_line.is_some() {
            return Err(TableError::Syntax {
                line: *line,
                message: "content after 'end'".into(),
            });
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content.as_str(), ""));
        match keyword {
            "stage" | "table" if rest.trim().is_empty() => {
                return Err(TableError::Syntax {
                    line: *line,
                    message: format!("expected '{keyword} <file>'"),
                });
            }
            "stage" => stage_files.push(rest.trim().to_string()),
            "table" => table_files.push(rest.trim().to_string()),
            "stabilized" => {
                let value = match rest.trim() {
                    "true" => true,
                    "false" => false,
                    other => {
                        return Err(TableError::Syntax {
                            line: *line,
                            message: format!("expected 'true' or 'false', found '{other}'"),
                        })
                    }
                };
                if stabilized.replace(value).is_some() {
                    return Err(TableError::Syntax {
                        line: *line,
                        message: "duplicate 'stabilized' directive".into(),
                    });
                }
            }
            "end" => end_line = Some(*line),
            other => {
                return Err(TableError::Syntax {
                    line: *line,
                    message: format!("unknown directive '{other}'"),
                })
            }
        }
    }

    let end_line = end_line.ok_or_else(|| TableError::Syntax {
        line: lines.last().map_or(1, |(l, _)| *l),
        message: "missing 'end'".into(),
    })?;
    let stabilized = stabilized.ok_or_else(|| TableError::Syntax {
        line: end_line,
        message: "missing 'stabilized' directive".into(),
    })?;
    Ok(SystemSpec {
        name,
        stage_files,
        table_files,
        stabilized,
    })
}

fn from_quiver_syntax(e: crate::quiver::QuiverError) -> TableError {
    match e {
        crate::quiver::QuiverError::Syntax { line, message } => TableError::Syntax { line, message },
        other => TableError::Syntax {
            line: 0,
            message: other.to_string(),
        },
    }
}

fn set_name(
    line: usize,
    what: &str,
    slot: &mut Option<String>,
    tokens: &[&str],
) -> Result<(), TableError> {
    if tokens.len() != 2 {
        return Err(TableError::Syntax {
            line,
            message: format!("expected '{what} <quiver-name>'"),
        });
    }
    if slot.replace(tokens[1].to_string()).is_some() {
        return Err(TableError::Syntax {
            line,
            message: format!("duplicate '{what}' directive"),
        });
    }
    Ok(())
}

fn single_value<'a>(line: usize, tokens: &[&'a str]) -> Result<&'a str, TableError> {
    if tokens.len() != 2 {
        return Err(TableError::Syntax {
            line,
            message: format!("expected '{} <value>'", tokens[0]),
        });
    }
    Ok(tokens[1])
}

/// Parses `<keyword> <id> -> <id>[*<mult>] ...` into the mapping.
fn parse_mapping_line(
    line: usize,
    tokens: &[&str],
    map: &mut BTreeMap<String, Multiset>,
) -> Result<(), TableError> {
    if tokens.len() < 4 || tokens[2] != "->" {
        return Err(TableError::Syntax {
            line,
            message: format!(
                "expected '{} <id> -> <id>[*<mult>] ...'",
                tokens[0]
            ),
        });
    }
    let source = tokens[1].to_string();
    let mut image: Multiset = BTreeMap::new();
    for token in &tokens[3..] {
        let (id, mult) = match token.split_once('*') {
            Some((id, m)) => {
                let mult: u64 = m.parse().map_err(|_| TableError::Syntax {
                    line,
                    message: format!("'{m}' is not a positive multiplicity"),
                })?;
                (id, mult)
            }
            None => (*token, 1),
        };
        if mult == 0 {
            return Err(TableError::Syntax {
                line,
                message: "multiplicity must be positive".into(),
            });
        }
        if id.is_empty() {
            return Err(TableError::Syntax {
                line,
                message: format!("malformed image token '{token}'"),
            });
        }
        *image.entry(id.to_string()).or_insert(0) += mult;
    }
    if map.insert(source.clone(), image).is_some() {
        return Err(TableError::Syntax {
            line,
            message: format!("duplicate '{}' line for vertex '{source}'", tokens[0]),
        });
    }
    Ok(())
}
