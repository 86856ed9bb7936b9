//! Distinguishable Bell-state classes.
//!
//! Two labels are confusable when some detection outcome is possible for both.
//! Classes are the connected components of that relation, so a class is never
//! split by any single outcome.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::apparatus::Apparatus;
use crate::bellcore::{BellLabel, VarCount};
use crate::detection::{signature_table_with_eps, OutcomePair, SignatureTable, Statistics, DEFAULT_EPS};
use crate::error::{LabError, Result};

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        Self {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[x] != root {
            let next = self.parent[x];
            self.parent[x] = root;
            x = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }

    /// Components as sorted member lists, ordered by smallest member.
    fn components(mut self) -> Vec<Vec<usize>> {
        let len = self.parent.len();
        let mut slot = vec![usize::MAX; len];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for x in 0..len {
            let r = self.find(x);
            if slot[r] == usize::MAX {
                slot[r] = out.len();
                out.push(Vec::new());
            }
            out[slot[r]].push(x);
        }
        out
    }
}

/// Disjoint cover of all `4^n` Bell labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: VarCount,
    classes: Vec<Vec<BellLabel>>,
    class_of: Vec<usize>,
}

impl Partition {
    fn from_components(n: VarCount, components: Vec<Vec<usize>>) -> Self {
        let mut class_of = vec![0; n.labels()];
        let classes = components
            .into_iter()
            .enumerate()
            .map(|(c, members)| {
                members
                    .into_iter()
                    .map(|k| {
                        class_of[k] = c;
                        BellLabel::from_index(n, k).expect("component member below 4^n")
                    })
                    .collect()
            })
            .collect();
        Self { n, classes, class_of }
    }

    pub fn n(&self) -> VarCount {
        self.n
    }

    pub fn classes(&self) -> &[Vec<BellLabel>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// Class index of the label at enumeration position `label_index`.
    pub fn class_of(&self, label_index: usize) -> usize {
        self.class_of[label_index]
    }

    /// Every class is a singleton.
    pub fn is_complete(&self) -> bool {
        self.classes.len() == self.n.labels()
    }

    /// True when every class of `self` lies inside one class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.n == coarser.n
            && self.classes.iter().all(|class| {
                let c = coarser.class_of(class[0].index());
                class.iter().all(|l| coarser.class_of(l.index()) == c)
            })
    }

    /// Disjoint, nonempty, and covering every label exactly once.
    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.n.labels()];
        for class in &self.classes {
            if class.is_empty() {
                return false;
            }
            for l in class {
                if std::mem::replace(&mut seen[l.index()], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, class) in self.classes.iter().enumerate() {
            let names: Vec<String> = class.iter().map(|l| l.to_string()).collect();
            writeln!(f, "class {}: {{{}}}", c + 1, names.join(", "))?;
        }
        Ok(())
    }
}

fn check_complete(table: &SignatureTable) -> Result<()> {
    if table.rows.len() != table.n.labels() {
        return Err(LabError::IncompleteTable {
            expected: table.n.labels(),
            found: table.rows.len(),
        });
    }
    Ok(())
}

/// Connected components of the shares-an-outcome relation.
pub fn partition_classes(table: &SignatureTable) -> Result<Partition> {
    check_complete(table)?;
    let mut uf = UnionFind::new(table.rows.len());
    for k in 0..table.outcomes.len() {
        let mut holders = table.labels_with(k);
        if let Some(first) = holders.next() {
            for other in holders {
                uf.union(first, other);
            }
        }
    }
    Ok(Partition::from_components(table.n, uf.components()))
}

/// Single-copy partition of `app` at the default support threshold.
pub fn partition_of(app: &Apparatus, stats: Statistics) -> Partition {
    let table = signature_table_with_eps(app, stats, DEFAULT_EPS);
    partition_classes(&table).expect("signature_table covers every label")
}

/// Joint partition from one table per copy: labels are confusable only when
/// their supports intersect in both tables.
pub fn two_copy_from_tables(first: &SignatureTable, second: &SignatureTable) -> Result<Partition> {
    check_complete(first)?;
    check_complete(second)?;
    if first.n != second.n {
        return Err(LabError::DimensionMismatch {
            expected: first.n.modes(),
            found: second.n.modes(),
        });
    }
    let len = first.rows.len();
    let mut uf = UnionFind::new(len);
    for a in 0..len {
        for b in (a + 1)..len {
            if first.rows[a].intersects(&first.rows[b]) && second.rows[a].intersects(&second.rows[b]) {
                uf.union(a, b);
            }
        }
    }
    Ok(Partition::from_components(first.n, uf.components()))
}

/// Partition when one copy goes through `first` and a second copy through `second`.
pub fn two_copy_partition(first: &Apparatus, second: &Apparatus, stats: Statistics) -> Result<Partition> {
    two_copy_partition_with_eps(first, second, stats, DEFAULT_EPS)
}

pub fn two_copy_partition_with_eps(first: &Apparatus, second: &Apparatus, stats: Statistics, eps: f64) -> Result<Partition> {
    if first.n() != second.n() {
        return Err(LabError::DimensionMismatch {
            expected: first.dim(),
            found: second.dim(),
        });
    }
    let t1 = signature_table_with_eps(first, stats, eps);
    let t2 = signature_table_with_eps(second, stats, eps);
    two_copy_from_tables(&t1, &t2)
}

/// Which class-count ceiling applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundMode {
    /// Any apparatus, one copy: `2^(n+1) − 1`.
    OneCopy,
    /// Left and right channels never interfere: `2^n`.
    SeparateChannel,
}

impl BoundMode {
    pub fn bound(self, n: VarCount) -> usize {
        match self {
            BoundMode::OneCopy => n.modes() - 1,
            BoundMode::SeparateChannel => n.value_strings(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BoundMode::OneCopy => "one-copy",
            BoundMode::SeparateChannel => "separate-channel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub mode: BoundMode,
    pub n: usize,
    pub class_count: usize,
    pub bound: usize,
    pub pass: bool,
    pub class_sizes: Vec<usize>,
}

pub fn verify_bound(p: &Partition, n: VarCount, mode: BoundMode) -> BoundReport {
    let bound = mode.bound(n);
    BoundReport {
        mode,
        n: n.get(),
        class_count: p.class_count(),
        bound,
        pass: p.n() == n && p.class_count() <= bound,
        class_sizes: p.class_sizes(),
    }
}

/// Outcomes a class can produce, split into those only it produces and those
/// it shares with other classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSignature {
    pub members: Vec<BellLabel>,
    pub unique: Vec<OutcomePair>,
    pub shared: Vec<OutcomePair>,
}

pub fn class_signature_report(table: &SignatureTable, p: &Partition) -> Result<Vec<ClassSignature>> {
    check_complete(table)?;
    if table.n != p.n() {
        return Err(LabError::DimensionMismatch {
            expected: table.n.labels(),
            found: p.n().labels(),
        });
    }
    let mut report = Vec::with_capacity(p.class_count());
    for (c, class) in p.classes().iter().enumerate() {
        let mut unique = BTreeSet::new();
        let mut shared = BTreeSet::new();
        for k in 0..table.outcomes.len() {
            let mut inside = false;
            let mut outside = false;
            for holder in table.labels_with(k) {
                if p.class_of(holder) == c {
                    inside = true;
                } else {
                    outside = true;
                }
            }
            if inside {
                if outside {
                    shared.insert(table.outcomes[k]);
                } else {
                    unique.insert(table.outcomes[k]);
                }
            }
        }
        report.push(ClassSignature {
            members: class.clone(),
            unique: unique.into_iter().collect(),
            shared: shared.into_iter().collect(),
        });
    }
    Ok(report)
}
