//! Declarative catalog entries, exactly as written in a catalog file.

use std::fmt::Write as _;

/// Word in named generators: `a^2*b^-1`, identity is empty.
pub type Word = Vec<(String, i64)>;

/// Group-ring element as coefficient/word terms.
pub type RingText = Vec<(String, Word)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDecl {
    pub name: String,
    pub gens: Vec<String>,
    /// `pow g^e = w`
    pub pows: Vec<(String, u64, Word)>,
    /// `conj g^h = w`, i.e. `h^-1 g h = w`
    pub conjs: Vec<(String, String, Word)>,
    pub class: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupDecl {
    pub name: String,
    pub group: String,
    pub gens: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingDecl {
    pub name: String,
    pub rank: usize,
    pub characteristic: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbedDecl {
    pub name: String,
    pub ring: String,
    pub rows: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDecl {
    pub name: String,
    pub ring: String,
    pub gens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: String,
    /// Subgroup or group the module is over.
    pub over: String,
    /// `Q` or `GF(p)`.
    pub field: String,
    pub dim: usize,
    /// Column-convention matrices for igs elements.
    pub acts: Vec<(Word, Vec<Vec<String>>)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InduceDecl {
    pub name: String,
    pub base: String,
    pub sub: String,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealDataDecl {
    pub name: String,
    pub k: String,
    /// `Z` or `GF(p)`.
    pub ring: String,
    pub gens: Vec<RingText>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseBody {
    Lemma7 { ideal: String, embed: String },
    Lemma8 { ideal: String, embed: String, prime: String },
    Culling { data: String, module: String, u: Vec<Vec<String>> },
    Prop3 { module: String },
    Prop4 { induce: String, data: String, d: Vec<String> },
    Descent { ring: String, chain: Vec<String>, ideals: Vec<String> },
}

impl CaseBody {
    pub fn keyword(&self) -> &'static str {
        match self {
            CaseBody::Lemma7 { .. } => "lemma7",
            CaseBody::Lemma8 { .. } => "lemma8",
            CaseBody::Culling { .. } => "culling",
            CaseBody::Prop3 { .. } => "prop3",
            CaseBody::Prop4 { .. } => "prop4",
            CaseBody::Descent { .. } => "descent",
        }
    }
}

/// A named check with an optional expected verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseDecl {
    pub name: String,
    pub body: CaseBody,
    pub expect: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryKind {
    Group(GroupDecl),
    Subgroup(SubgroupDecl),
    Ring(RingDecl),
    Embed(EmbedDecl),
    Ideal(IdealDecl),
    Module(ModuleDecl),
    Induce(InduceDecl),
    IdealData(IdealDataDecl),
    Case(CaseDecl),
}

impl EntryKind {
    pub fn name(&self) -> &str {
        match self {
            EntryKind::Group(d) => &d.name,
            EntryKind::Subgroup(d) => &d.name,
            EntryKind::Ring(d) => &d.name,
            EntryKind::Embed(d) => &d.name,
            EntryKind::Ideal(d) => &d.name,
            EntryKind::Module(d) => &d.name,
            EntryKind::Induce(d) => &d.name,
            EntryKind::IdealData(d) => &d.name,
            EntryKind::Case(d) => &d.name,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    /// 1-based line of the entry's first line.
    pub line: usize,
    pub kind: EntryKind,
}

#[derive(Debug, Clone, Default)]
pub struct Catalog {
    pub entries: Vec<Entry>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Catalog) -> bool {
        self.entries.len() == other.entries.len() && self.entries.iter().zip(&other.entries).all(|(a, b)| a.kind == b.kind)
    }
}

impl Eq for Catalog {}

impl Catalog {
    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.kind.name() == name)
    }

    pub fn cases(&self) -> impl Iterator<Item = (&Entry, &CaseDecl)> {
        self.entries.iter().filter_map(|e| match &e.kind {
            EntryKind::Case(c) => Some((e, c)),
            _ => None,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Canonical text; parsing it gives back an equal catalog.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            render_entry(&mut out, &e.kind);
        }
        out
    }
}

pub fn render_word(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|(g, e)| if *e == 1 { g.clone() } else { format!("{g}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn render_ring_text(t: &RingText) -> String {
    if t.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (c, w)) in t.iter().enumerate() {
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c.as_str()),
        };
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        if w.is_empty() {
            s.push_str(mag);
        } else if mag == "1" {
            s.push_str(&render_word(w));
        } else {
            let _ = write!(s, "{mag}*{}", render_word(w));
        }
    }
    s
}

fn render_matrix(m: &[Vec<String>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(","))).collect();
    format!("[{}]", rows.join(","))
}

fn render_entry(out: &mut String, kind: &EntryKind) {
    match kind {
        EntryKind::Group(g) => {
            let _ = writeln!(out, "group {}", g.name);
            let _ = writeln!(out, "gens {}", g.gens.join(" "));
            for (x, e, w) in &g.pows {
                let _ = writeln!(out, "pow {x}^{e} = {}", render_word(w));
            }
            for (x, y, w) in &g.conjs {
                let _ = writeln!(out, "conj {x}^{y} = {}", render_word(w));
            }
            if let Some(c) = g.class {
                let _ = writeln!(out, "class {c}");
            }
        }
        EntryKind::Subgroup(s) => {
            let gens: Vec<String> = s.gens.iter().map(render_word).collect();
            let _ = writeln!(out, "subgroup {} of {} = {}", s.name, s.group, gens.join(", "));
        }
        EntryKind::Ring(r) => {
            let _ = writeln!(out, "ring {} rank={} char={}", r.name, r.rank, r.characteristic);
        }
        EntryKind::Embed(e) => {
            let rows: Vec<String> =
                e.rows.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")).collect();
            let _ = writeln!(out, "embed {} in {} = [{}]", e.name, e.ring, rows.join("; "));
        }
        EntryKind::Ideal(i) => {
            let _ = writeln!(out, "ideal {} in {} = {}", i.name, i.ring, i.gens.join(", "));
        }
        EntryKind::Module(m) => {
            let _ = writeln!(out, "module {} over {} field={} dim={}", m.name, m.over, m.field, m.dim);
            for (w, mat) in &m.acts {
                let _ = writeln!(out, "act {} = {}", render_word(w), render_matrix(mat));
            }
        }
        EntryKind::Induce(c) => {
            let _ = writeln!(out, "inducecase {} base={} sub={} group={}", c.name, c.base, c.sub, c.group);
        }
        EntryKind::IdealData(d) => {
            let gens: Vec<String> = d.gens.iter().map(render_ring_text).collect();
            let _ = writeln!(out, "idealdata {} K={} R={} gens = {}", d.name, d.k, d.ring, gens.join(", "));
        }
        EntryKind::Case(c) => {
            let _ = write!(out, "{} {}", c.body.keyword(), c.name);
            match &c.body {
                CaseBody::Lemma7 { ideal, embed } => {
                    let _ = write!(out, " ideal={ideal} embed={embed}");
                }
                CaseBody::Lemma8 { ideal, embed, prime } => {
                    let _ = write!(out, " ideal={ideal} embed={embed} prime={prime}");
                }
                CaseBody::Culling { data, module, u } => {
                    let _ = write!(out, " data={data} module={module} u={}", render_matrix(u));
                }
                CaseBody::Prop3 { module } => {
                    let _ = write!(out, " module={module}");
                }
                CaseBody::Prop4 { induce, data, d } => {
                    let _ = write!(out, " induce={induce} data={data} d=[{}]", d.join(","));
                }
                CaseBody::Descent { ring, chain, ideals } => {
                    let _ = write!(out, " ring={ring} chain=[{}] ideals=[{}]", chain.join(", "), ideals.join(", "));
                }
            }
            if let Some(x) = &c.expect {
                let _ = write!(out, " expect={x}");
            }
            out.push('\n');
        }
    }
}
