//! Groups with solvable word problem and homomorphisms between them.
//!
//! Supported kinds are the trivial group, cyclic groups `Z/m`, finite groups
//! given by a multiplication table, free abelian groups `Z^k` and free groups
//! `F_k`. Elements are stored in normal form so structural equality is group
//! equality, and every kind carries a deterministic total order on elements.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::intlinalg::{smith_normal_form, IntMatrix};

/// A generator letter of a free group: `+(i+1)` is generator `i`, `-(i+1)` its inverse.
pub type Letter = i32;

fn letter_key(l: Letter) -> (i32, bool) {
    (l.abs(), l < 0)
}

fn cmp_words(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .map(|&l| letter_key(l))
            .cmp(b.iter().map(|&l| letter_key(l)))
    })
}

/// Normal-form payload of a group element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum GroupElement {
    Trivial,
    /// Residue in `[0, m)`.
    Cyclic(u64),
    /// Row index into the multiplication table.
    Table(usize),
    FreeAbelian(Vec<i64>),
    /// Freely reduced word.
    Free(Vec<Letter>),
}

impl GroupElement {
    fn kind_rank(&self) -> u8 {
        match self {
            GroupElement::Trivial => 0,
            GroupElement::Cyclic(_) => 1,
            GroupElement::Table(_) => 2,
            GroupElement::FreeAbelian(_) => 3,
            GroupElement::Free(_) => 4,
        }
    }
}

impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        use GroupElement::*;
        match (self, other) {
            (Trivial, Trivial) => Ordering::Equal,
            (Cyclic(a), Cyclic(b)) => a.cmp(b),
            (Table(a), Table(b)) => a.cmp(b),
            (FreeAbelian(a), FreeAbelian(b)) => a.cmp(b),
            (Free(a), Free(b)) => cmp_words(a, b),
            _ => self.kind_rank().cmp(&other.kind_rank()),
        }
    }
}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Trivial => write!(f, "1"),
            GroupElement::Cyclic(k) => write!(f, "{k}"),
            GroupElement::Table(i) => write!(f, "#{i}"),
            GroupElement::FreeAbelian(v) => {
                let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", parts.join(","))
            }
            GroupElement::Free(w) => {
                if w.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", format_word(w))
                }
            }
        }
    }
}

fn format_word(w: &[Letter]) -> String {
    w.iter()
        .map(|&l| {
            let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
            if l < 0 {
                c.to_ascii_uppercase().to_string()
            } else {
                c.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn reduce_word(word: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// A finite group given by its multiplication table.
#[derive(Debug)]
pub struct TableGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    name: Option<String>,
}

impl PartialEq for TableGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for TableGroup {}

impl std::hash::Hash for TableGroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.table.hash(state);
    }
}

impl TableGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidInput(format!("table row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidInput(format!("table entry {bad} out of range in row {i}")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidInput("table has no identity".into()))?;
        let mut inverse = vec![0; n];
        for x in 0..n {
            inverse[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::InvalidInput(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidInput(format!(
                            "table is not associative at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(TableGroup {
            table,
            identity,
            inverse,
            name: None,
        })
    }

    fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }
}

/// A supported group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Group {
    Trivial,
    Cyclic(u64),
    Table(Arc<TableGroup>),
    FreeAbelian(usize),
    Free(usize),
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Trivial => write!(f, "trivial"),
            Group::Cyclic(m) => write!(f, "cyclic:{m}"),
            Group::Table(t) => match &t.name {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "table:{}", t.order()),
            },
            Group::FreeAbelian(k) => write!(f, "free_abelian:{k}"),
            Group::Free(k) => write!(f, "free:{k}"),
        }
    }
}

impl Group {
    pub fn cyclic(m: u64) -> Result<Self> {
        match m {
            0 => Err(Error::InvalidInput("cyclic group order must be positive".into())),
            1 => Ok(Group::Trivial),
            _ => Ok(Group::Cyclic(m)),
        }
    }

    /// The infinite cyclic group, as free abelian of rank one.
    pub fn integers() -> Self {
        Group::FreeAbelian(1)
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank > 26 {
            return Err(Error::InvalidInput("free groups of rank > 26 are not supported".into()));
        }
        Ok(Group::Free(rank))
    }

    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        Ok(Group::Table(Arc::new(TableGroup::new(table)?)))
    }

    /// Dihedral group of order `2n`; element `r^a s^e` has index `a + n e`.
    pub fn dihedral(n: usize) -> Self {
        let order = 2 * n;
        let table = (0..order)
            .map(|x| {
                let (a, e) = (x % n, x / n);
                (0..order)
                    .map(|y| {
                        let (b, f) = (y % n, y / n);
                        let rot = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                        rot + n * ((e + f) % 2)
                    })
                    .collect()
            })
            .collect();
        let tg = TableGroup::new(table).expect("dihedral table is a group");
        let name = if n == 3 { "s3".to_string() } else { format!("dihedral:{n}") };
        Group::Table(Arc::new(tg.named(&name)))
    }

    /// The symmetric group on three letters (dihedral of order 6).
    pub fn symmetric3() -> Self {
        Group::dihedral(3)
    }

    /// `Z/2 x Z/2` as a table group.
    pub fn klein4() -> Self {
        let table = (0..4).map(|x| (0..4).map(|y| x ^ y).collect()).collect();
        Group::Table(Arc::new(TableGroup::new(table).expect("klein table").named("klein")))
    }

    /// `Z/m` as a table group, for tests that need the table code path.
    pub fn cyclic_table(m: usize) -> Self {
        let table = (0..m).map(|x| (0..m).map(|y| (x + y) % m).collect()).collect();
        Group::Table(Arc::new(
            TableGroup::new(table).expect("cyclic table").named(&format!("cyclic_table:{m}")),
        ))
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Trivial => GroupElement::Trivial,
            Group::Cyclic(_) => GroupElement::Cyclic(0),
            Group::Table(t) => GroupElement::Table(t.identity),
            Group::FreeAbelian(k) => GroupElement::FreeAbelian(vec![0; *k]),
            Group::Free(_) => GroupElement::Free(Vec::new()),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (Group::Trivial, GroupElement::Trivial) => true,
            (Group::Cyclic(m), GroupElement::Cyclic(k)) => k < m,
            (Group::Table(t), GroupElement::Table(i)) => *i < t.order(),
            (Group::FreeAbelian(k), GroupElement::FreeAbelian(v)) => v.len() == *k,
            (Group::Free(k), GroupElement::Free(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *k)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            _ => false,
        }
    }

    pub fn check(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!("element {x} does not belong to group {self}")))
        }
    }

    /// Product `x y`. Both arguments must belong to the group.
    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        match (self, x, y) {
            (Group::Trivial, _, _) => GroupElement::Trivial,
            (Group::Cyclic(m), GroupElement::Cyclic(a), GroupElement::Cyclic(b)) => {
                GroupElement::Cyclic((a + b) % m)
            }
            (Group::Table(t), GroupElement::Table(a), GroupElement::Table(b)) => {
                GroupElement::Table(t.table[*a][*b])
            }
            (Group::FreeAbelian(_), GroupElement::FreeAbelian(a), GroupElement::FreeAbelian(b)) => {
                GroupElement::FreeAbelian(a.iter().zip(b).map(|(p, q)| p + q).collect())
            }
            (Group::Free(_), GroupElement::Free(a), GroupElement::Free(b)) => {
                GroupElement::Free(reduce_word(a.iter().chain(b.iter()).copied()))
            }
            _ => panic!("group element kind does not match group {self}"),
        }
    }

    pub fn inv(&self, x: &GroupElement) -> GroupElement {
        match (self, x) {
            (Group::Trivial, _) => GroupElement::Trivial,
            (Group::Cyclic(m), GroupElement::Cyclic(a)) => GroupElement::Cyclic((m - a) % m),
            (Group::Table(t), GroupElement::Table(a)) => GroupElement::Table(t.inverse[*a]),
            (Group::FreeAbelian(_), GroupElement::FreeAbelian(a)) => {
                GroupElement::FreeAbelian(a.iter().map(|v| -v).collect())
            }
            (Group::Free(_), GroupElement::Free(w)) => {
                GroupElement::Free(w.iter().rev().map(|l| -l).collect())
            }
            _ => panic!("group element kind does not match group {self}"),
        }
    }

    pub fn pow(&self, x: &GroupElement, n: i64) -> GroupElement {
        let base = if n < 0 { self.inv(x) } else { x.clone() };
        let mut acc = self.identity();
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            sq = self.mul(&sq, &sq);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self, x: &GroupElement) -> bool {
        *x == self.identity()
    }

    /// `g^2 = 1` and `g != 1`.
    pub fn is_involution(&self, x: &GroupElement) -> bool {
        !self.is_identity(x) && self.is_identity(&self.mul(x, x))
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Group::Trivial => Some(1),
            Group::Cyclic(m) => Some(*m as usize),
            Group::Table(t) => Some(t.order()),
            Group::FreeAbelian(0) | Group::Free(0) => Some(1),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Group::Trivial | Group::Cyclic(_) | Group::FreeAbelian(_) => true,
            Group::Free(k) => *k <= 1,
            Group::Table(t) => {
                let n = t.order();
                (0..n).all(|a| (0..n).all(|b| t.table[a][b] == t.table[b][a]))
            }
        }
    }

    /// All elements in group order, for finite groups.
    pub fn elements(&self) -> Option<Vec<GroupElement>> {
        match self {
            Group::Trivial => Some(vec![GroupElement::Trivial]),
            Group::Cyclic(m) => Some((0..*m).map(GroupElement::Cyclic).collect()),
            Group::Table(t) => Some((0..t.order()).map(GroupElement::Table).collect()),
            Group::FreeAbelian(0) | Group::Free(0) => Some(vec![self.identity()]),
            _ => None,
        }
    }

    /// Standard generators: the unit for `Z/m`, basis vectors for `Z^k`,
    /// letters for `F_k`, every element for table groups.
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            Group::Trivial => Vec::new(),
            Group::Cyclic(_) => vec![GroupElement::Cyclic(1)],
            Group::Table(t) => (0..t.order()).map(GroupElement::Table).collect(),
            Group::FreeAbelian(k) => (0..*k)
                .map(|i| {
                    let mut v = vec![0; *k];
                    v[i] = 1;
                    GroupElement::FreeAbelian(v)
                })
                .collect(),
            Group::Free(k) => (1..=*k as i32).map(|l| GroupElement::Free(vec![l])).collect(),
        }
    }

    /// Word length with respect to the generating sets of [`Group::generators`]
    /// (all non-identity elements have length one in a table group).
    pub fn word_length(&self, x: &GroupElement) -> usize {
        match (self, x) {
            (Group::Trivial, _) => 0,
            (Group::Cyclic(m), GroupElement::Cyclic(k)) => (*k).min(m - k) as usize,
            (Group::Table(t), GroupElement::Table(i)) => usize::from(*i != t.identity),
            (Group::FreeAbelian(_), GroupElement::FreeAbelian(v)) => {
                v.iter().map(|c| c.unsigned_abs() as usize).sum()
            }
            (Group::Free(_), GroupElement::Free(w)) => w.len(),
            _ => panic!("group element kind does not match group {self}"),
        }
    }

    /// Every element of word length at most `radius`, without duplicates, in group order.
    pub fn ball(&self, radius: usize) -> Vec<GroupElement> {
        match self {
            Group::Trivial | Group::Cyclic(_) | Group::Table(_) => {
                let mut all = self.elements().expect("finite");
                all.retain(|x| self.word_length(x) <= radius);
                all
            }
            Group::FreeAbelian(k) => {
                let mut out = Vec::new();
                let mut cur = vec![0i64; *k];
                fill_lattice_ball(&mut cur, 0, radius as i64, &mut out);
                out.sort();
                out
            }
            Group::Free(k) => {
                let mut out = vec![GroupElement::Free(Vec::new())];
                let mut frontier: VecDeque<Vec<Letter>> = VecDeque::from([Vec::new()]);
                while let Some(w) = frontier.pop_front() {
                    if w.len() == radius {
                        continue;
                    }
                    for g in 1..=*k as i32 {
                        for l in [g, -g] {
                            if w.last() == Some(&-l) {
                                continue;
                            }
                            let mut next = w.clone();
                            next.push(l);
                            out.push(GroupElement::Free(next.clone()));
                            frontier.push_back(next);
                        }
                    }
                }
                out.sort();
                out
            }
        }
    }

    /// Parses an element from its JSON form: an integer (cyclic, table, trivial),
    /// an integer vector (free abelian; a bare integer is accepted in rank one)
    /// or a word string such as `"a B a"` (free; capitals are inverses).
    pub fn parse_element(&self, v: &Value) -> Result<GroupElement> {
        let bad = |msg: &str| Error::parse("group element", format!("{msg}: {v}"));
        let x = match self {
            Group::Trivial => match v {
                Value::Number(n) if n.as_i64() == Some(0) || n.as_i64() == Some(1) => {
                    GroupElement::Trivial
                }
                Value::String(s) if s.trim() == "1" || s.trim().is_empty() => GroupElement::Trivial,
                Value::Null => GroupElement::Trivial,
                _ => return Err(bad("expected 0 for the trivial group")),
            },
            Group::Cyclic(m) => {
                let k = v.as_i64().ok_or_else(|| bad("expected an integer"))?;
                GroupElement::Cyclic(k.rem_euclid(*m as i64) as u64)
            }
            Group::Table(t) => {
                let i = v.as_u64().ok_or_else(|| bad("expected a table index"))? as usize;
                if i >= t.order() {
                    return Err(bad("table index out of range"));
                }
                GroupElement::Table(i)
            }
            Group::FreeAbelian(k) => match v {
                Value::Array(items) => {
                    let vec: Option<Vec<i64>> = items.iter().map(|x| x.as_i64()).collect();
                    let vec = vec.ok_or_else(|| bad("expected an integer vector"))?;
                    if vec.len() != *k {
                        return Err(bad("vector length differs from rank"));
                    }
                    GroupElement::FreeAbelian(vec)
                }
                Value::Number(n) if *k == 1 => {
                    GroupElement::FreeAbelian(vec![n.as_i64().ok_or_else(|| bad("expected an integer"))?])
                }
                _ => return Err(bad("expected an integer vector")),
            },
            Group::Free(k) => {
                let s = v.as_str().ok_or_else(|| bad("expected a word string"))?;
                let mut word = Vec::new();
                for c in s.chars() {
                    if c.is_whitespace() || c == '1' {
                        continue;
                    }
                    if !c.is_ascii_alphabetic() {
                        return Err(bad("unexpected character in word"));
                    }
                    let g = (c.to_ascii_lowercase() as u8 - b'a') as usize;
                    if g >= *k {
                        return Err(bad("generator outside the rank"));
                    }
                    let l = (g + 1) as Letter;
                    word.push(if c.is_ascii_uppercase() { -l } else { l });
                }
                GroupElement::Free(reduce_word(word))
            }
        };
        Ok(x)
    }

    pub fn element_to_json(&self, x: &GroupElement) -> Value {
        match x {
            GroupElement::Trivial => json!(0),
            GroupElement::Cyclic(k) => json!(k),
            GroupElement::Table(i) => json!(i),
            GroupElement::FreeAbelian(v) => json!(v),
            GroupElement::Free(w) => {
                if w.is_empty() {
                    json!("1")
                } else {
                    json!(format_word(w))
                }
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Group::Trivial => json!({"kind": "trivial"}),
            Group::Cyclic(m) => json!({"kind": "cyclic", "m": m}),
            Group::Table(t) => json!({"kind": "table", "table": t.table}),
            Group::FreeAbelian(k) => json!({"kind": "free_abelian", "rank": k}),
            Group::Free(k) => json!({"kind": "free", "rank": k}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        if let Some(s) = v.as_str() {
            return Group::from_spec(s);
        }
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("group.kind", "missing group kind"))?;
        let uint = |field: &str| -> Result<u64> {
            v.get(field)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::parse(format!("group.{field}"), "expected a non-negative integer"))
        };
        match kind {
            "trivial" => Ok(Group::Trivial),
            "cyclic" => Group::cyclic(uint("m")?),
            "free" => Group::free(uint("rank")? as usize),
            "free_abelian" => Ok(Group::FreeAbelian(uint("rank")? as usize)),
            "table" => {
                let rows = v
                    .get("table")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::parse("group.table", "expected an array of rows"))?;
                let mut table = Vec::with_capacity(rows.len());
                for (i, row) in rows.iter().enumerate() {
                    let row: Option<Vec<usize>> = row
                        .as_array()
                        .map(|r| r.iter().map(|x| x.as_u64().map(|u| u as usize)).collect())
                        .unwrap_or(None);
                    table.push(row.ok_or_else(|| Error::parse(format!("group.table[{i}]"), "expected indices"))?);
                }
                Group::from_table(table)
            }
            other => Err(Error::parse("group.kind", format!("unknown group kind {other:?}"))),
        }
    }

    /// Parses short command-line specs: `trivial`, `cyclic:4`, `z`, `free_abelian:2`,
    /// `free:2`, `s3`, `klein`, `dihedral:4`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim().to_ascii_lowercase();
        let (name, arg) = match spec.split_once(':') {
            Some((a, b)) => (a.to_string(), Some(b.to_string())),
            None => (spec.clone(), None),
        };
        let num = |a: &Option<String>| -> Result<u64> {
            a.as_deref()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::parse("group spec", format!("expected a number in {spec:?}")))
        };
        match name.as_str() {
            "trivial" | "1" => Ok(Group::Trivial),
            "cyclic" | "c" => Group::cyclic(num(&arg)?),
            "z" | "integers" => Ok(Group::integers()),
            "free_abelian" | "zk" => Ok(Group::FreeAbelian(num(&arg)? as usize)),
            "free" | "f" => Group::free(num(&arg)? as usize),
            "s3" | "sym3" => Ok(Group::symmetric3()),
            "klein" | "v4" => Ok(Group::klein4()),
            "dihedral" | "d" => {
                let n = num(&arg)? as usize;
                if n < 2 {
                    return Err(Error::parse("group spec", "dihedral order parameter must be at least 2"));
                }
                Ok(Group::dihedral(n))
            }
            "d4" => Ok(Group::dihedral(4)),
            _ => Err(Error::parse("group spec", format!("unknown group {spec:?}"))),
        }
    }
}

fn fill_lattice_ball(cur: &mut Vec<i64>, pos: usize, budget: i64, out: &mut Vec<GroupElement>) {
    if pos == cur.len() {
        out.push(GroupElement::FreeAbelian(cur.clone()));
        return;
    }
    for v in -budget..=budget {
        cur[pos] = v;
        fill_lattice_ball(cur, pos + 1, budget - v.abs(), out);
    }
    cur[pos] = 0;
}

/// A surjective homomorphism `source -> target` given by images of the source generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientMap {
    source: Group,
    target: Group,
    images: Vec<GroupElement>,
}

impl QuotientMap {
    /// Validates that the assignment extends to a homomorphism and, for finite
    /// and free abelian targets, that it is onto.
    pub fn new(source: Group, target: Group, images: Vec<GroupElement>) -> Result<Self> {
        let gens = source.generators();
        if gens.len() != images.len() {
            return Err(Error::InvalidInput(format!(
                "quotient map needs {} generator images, got {}",
                gens.len(),
                images.len()
            )));
        }
        for x in &images {
            target.check(x)?;
        }
        match &source {
            Group::Cyclic(m) => {
                if !target.is_identity(&target.pow(&images[0], *m as i64)) {
                    return Err(Error::InvalidInput(format!(
                        "generator image {} does not have order dividing {m}",
                        images[0]
                    )));
                }
            }
            Group::FreeAbelian(_) => {
                for a in &images {
                    for b in &images {
                        if target.mul(a, b) != target.mul(b, a) {
                            return Err(Error::InvalidInput(format!(
                                "images {a} and {b} of free abelian generators do not commute"
                            )));
                        }
                    }
                }
            }
            Group::Table(t) => {
                for a in 0..t.order() {
                    for b in 0..t.order() {
                        let lhs = &images[t.table[a][b]];
                        let rhs = target.mul(&images[a], &images[b]);
                        if *lhs != rhs {
                            return Err(Error::InvalidInput(format!(
                                "element assignment is not a homomorphism at ({a},{b})"
                            )));
                        }
                    }
                }
            }
            Group::Trivial | Group::Free(_) => {}
        }
        let q = QuotientMap { source, target, images };
        q.check_surjective()?;
        Ok(q)
    }

    /// Builds a map sending every generator of `source` to the corresponding entry of `images`,
    /// given in JSON form.
    pub fn from_json(v: &Value) -> Result<Self> {
        let source = Group::from_json(v.get("source").ok_or_else(|| Error::parse("quotient.source", "missing"))?)?;
        let target = Group::from_json(v.get("target").ok_or_else(|| Error::parse("quotient.target", "missing"))?)?;
        let imgs = v
            .get("images")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::parse("quotient.images", "expected an array"))?;
        let images = imgs
            .iter()
            .map(|x| target.parse_element(x))
            .collect::<Result<Vec<_>>>()?;
        QuotientMap::new(source, target, images)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "images": self.images.iter().map(|x| self.target.element_to_json(x)).collect::<Vec<_>>(),
        })
    }

    fn check_surjective(&self) -> Result<()> {
        let target = &self.target;
        if target.is_finite() {
            let mut seen: BTreeSet<GroupElement> = BTreeSet::from([target.identity()]);
            let mut queue: Vec<GroupElement> = vec![target.identity()];
            while let Some(x) = queue.pop() {
                for g in &self.images {
                    let y = target.mul(&x, g);
                    if seen.insert(y.clone()) {
                        queue.push(y);
                    }
                }
            }
            if Some(seen.len()) != target.order() {
                return Err(Error::InvalidInput(format!(
                    "map onto {target} is not surjective: image has {} elements",
                    seen.len()
                )));
            }
        } else if let Group::FreeAbelian(k) = target {
            let cols = self.images.len();
            let mut m = IntMatrix::<BigInt>::zeros(*k, cols);
            for (j, img) in self.images.iter().enumerate() {
                if let GroupElement::FreeAbelian(v) = img {
                    for (i, c) in v.iter().enumerate() {
                        m.set(i, j, BigInt::from(*c));
                    }
                }
            }
            let snf = smith_normal_form(&m);
            let full = snf.factors.len() == *k && snf.factors.iter().all(|d| *d == BigInt::from(1));
            if !full {
                return Err(Error::InvalidInput(format!("map onto {target} is not surjective")));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Group {
        &self.source
    }

    pub fn target(&self) -> &Group {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    pub fn image(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check(x)?;
        let t = &self.target;
        Ok(match x {
            GroupElement::Trivial => t.identity(),
            GroupElement::Cyclic(k) => t.pow(&self.images[0], *k as i64),
            GroupElement::Table(i) => self.images[*i].clone(),
            GroupElement::FreeAbelian(v) => v
                .iter()
                .zip(&self.images)
                .fold(t.identity(), |acc, (e, g)| t.mul(&acc, &t.pow(g, *e))),
            GroupElement::Free(w) => w.iter().fold(t.identity(), |acc, &l| {
                let g = &self.images[l.unsigned_abs() as usize - 1];
                let g = if l < 0 { t.inv(g) } else { g.clone() };
                t.mul(&acc, &g)
            }),
        })
    }

    pub fn kernel_contains(&self, x: &GroupElement) -> Result<bool> {
        Ok(self.target.is_identity(&self.image(x)?))
    }

    /// Shortest preimage of `y`, ties broken by the source order; searches balls
    /// up to `max_radius` for infinite sources.
    pub fn minimal_preimage(&self, y: &GroupElement, max_radius: usize) -> Result<GroupElement> {
        self.target.check(y)?;
        let radius_cap = if self.source.is_finite() {
            usize::MAX
        } else {
            max_radius
        };
        let mut r = 0usize;
        loop {
            let ball = self.source.ball(r);
            let mut best: Option<GroupElement> = None;
            for x in &ball {
                if self.source.word_length(x) == r && self.image(x)? == *y {
                    best = Some(x.clone());
                    break;
                }
            }
            if let Some(x) = best {
                return Ok(x);
            }
            if self.source.is_finite() && ball.len() == self.source.order().unwrap() {
                return Err(Error::InvalidInput(format!("{y} has no preimage")));
            }
            if r >= radius_cap {
                return Err(Error::ResourceBound(format!(
                    "no preimage of {y} within word length {max_radius}"
                )));
            }
            r += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Group {
        Group::integers()
    }

    fn zv(v: &[i64]) -> GroupElement {
        GroupElement::FreeAbelian(v.to_vec())
    }

    fn word(g: &Group, s: &str) -> GroupElement {
        g.parse_element(&json!(s)).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let q = QuotientMap::new(z(), Group::Cyclic(2), vec![GroupElement::Cyclic(1)]).unwrap();
        assert_eq!(q.image(&zv(&[3])).unwrap(), GroupElement::Cyclic(1));
        assert!(q.kernel_contains(&zv(&[4])).unwrap());
        assert!(!q.kernel_contains(&zv(&[3])).unwrap());

        let q2 = QuotientMap::new(Group::FreeAbelian(2), z(), vec![zv(&[1]), zv(&[0])]).unwrap();
        assert_eq!(q2.image(&zv(&[2, 5])).unwrap(), zv(&[2]));

        let f2 = Group::Free(2);
        let q3 = QuotientMap::new(
            f2.clone(),
            Group::Cyclic(3),
            vec![GroupElement::Cyclic(1), GroupElement::Cyclic(1)],
        )
        .unwrap();
        assert_eq!(q3.image(&word(&f2, "a b A b")).unwrap(), GroupElement::Cyclic(2));
        assert!(q3.kernel_contains(&word(&f2, "a B")).unwrap());
    }

    #[test]
    fn foreign_element_is_domain_error() {
        let q = QuotientMap::new(z(), Group::Cyclic(2), vec![GroupElement::Cyclic(1)]).unwrap();
        assert!(matches!(q.image(&GroupElement::Cyclic(1)), Err(Error::Domain(_))));
        assert!(q.image(&zv(&[1, 2])).is_err());
    }

    #[test]
    fn non_homomorphisms_rejected() {
        assert!(QuotientMap::new(Group::Cyclic(4), Group::Cyclic(3), vec![GroupElement::Cyclic(1)]).is_err());
        assert!(QuotientMap::new(z(), Group::Cyclic(4), vec![GroupElement::Cyclic(2)]).is_err());
        let s3 = Group::symmetric3();
        // sending a rotation to the generator of Z/2 and everything else trivially is not a map
        let mut images = vec![GroupElement::Cyclic(0); 6];
        images[1] = GroupElement::Cyclic(1);
        assert!(QuotientMap::new(s3, Group::Cyclic(2), images).is_err());
        assert!(QuotientMap::new(Group::FreeAbelian(2), z(), vec![zv(&[2]), zv(&[0])]).is_err());
    }

    #[test]
    fn ball_examples() {
        assert_eq!(
            Group::Cyclic(3).ball(10),
            vec![GroupElement::Cyclic(0), GroupElement::Cyclic(1), GroupElement::Cyclic(2)]
        );
        assert_eq!(z().ball(2), vec![zv(&[-2]), zv(&[-1]), zv(&[0]), zv(&[1]), zv(&[2])]);
        let f2 = Group::Free(2);
        let b = f2.ball(1);
        let expected: Vec<GroupElement> = ["1", "a", "A", "b", "B"].iter().map(|s| word(&f2, s)).collect();
        assert_eq!(b, expected);
        assert_eq!(f2.ball(2).len(), 1 + 4 + 12);
        assert_eq!(Group::FreeAbelian(2).ball(1).len(), 5);
    }

    #[test]
    fn ball_is_monotone_and_stabilizes() {
        for g in [Group::Cyclic(5), Group::symmetric3(), z(), Group::Free(2), Group::FreeAbelian(2)] {
            for r in 0..4 {
                let small: BTreeSet<_> = g.ball(r).into_iter().collect();
                let big: BTreeSet<_> = g.ball(r + 1).into_iter().collect();
                assert!(small.is_subset(&big), "{g} r={r}");
                assert_eq!(small.len(), g.ball(r).len());
            }
            if let Some(n) = g.order() {
                assert_eq!(g.ball(n).len(), n);
            }
        }
    }

    #[test]
    fn group_axioms_on_balls() {
        for g in [Group::Cyclic(4), Group::symmetric3(), Group::dihedral(4), z(), Group::Free(2), Group::FreeAbelian(2)] {
            let elems = g.ball(2);
            let e = g.identity();
            for x in &elems {
                assert_eq!(g.mul(&e, x), *x);
                assert_eq!(g.mul(x, &e), *x);
                assert_eq!(g.inv(&g.inv(x)), *x);
                assert!(g.is_identity(&g.mul(x, &g.inv(x))));
                for y in elems.iter().take(8) {
                    for w in elems.iter().take(8) {
                        assert_eq!(g.mul(&g.mul(x, y), w), g.mul(x, &g.mul(y, w)));
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_is_homomorphism() {
        let d4 = Group::dihedral(4);
        let images: Vec<GroupElement> = (0..8).map(|i| GroupElement::Cyclic((i / 4) as u64)).collect();
        let q = QuotientMap::new(d4.clone(), Group::Cyclic(2), images).unwrap();
        for x in d4.elements().unwrap() {
            for y in d4.elements().unwrap() {
                let lhs = q.image(&d4.mul(&x, &y)).unwrap();
                let rhs = Group::Cyclic(2).mul(&q.image(&x).unwrap(), &q.image(&y).unwrap());
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let f2 = Group::Free(2);
        assert!(word(&f2, "b") < word(&f2, "a a"));
        assert!(word(&f2, "a") < word(&f2, "A"));
        assert!(word(&f2, "A") < word(&f2, "b"));
        assert_eq!(word(&f2, "a A b"), word(&f2, "b"));
    }

    #[test]
    fn minimal_preimages() {
        let q = QuotientMap::new(Group::FreeAbelian(2), z(), vec![zv(&[1]), zv(&[0])]).unwrap();
        assert_eq!(q.minimal_preimage(&zv(&[-2]), 8).unwrap(), zv(&[-2, 0]));
        let q4 = QuotientMap::new(Group::Cyclic(4), Group::Cyclic(2), vec![GroupElement::Cyclic(1)]).unwrap();
        assert_eq!(q4.minimal_preimage(&GroupElement::Cyclic(1), 8).unwrap(), GroupElement::Cyclic(1));
    }

    #[test]
    fn json_forms() {
        for spec in ["trivial", "cyclic:4", "free:2", "free_abelian:2", "s3"] {
            let g = Group::from_spec(spec).unwrap();
            assert_eq!(Group::from_json(&g.to_json()).unwrap(), g);
        }
        let f2 = Group::Free(2);
        let x = word(&f2, "a B a");
        assert_eq!(f2.element_to_json(&x), json!("a B a"));
        assert!(Group::from_json(&json!({"kind": "table", "table": [[0, 1], [1, 1]]})).is_err());
    }
}
