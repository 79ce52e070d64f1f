//! Line-oriented catalog parser.

use std::collections::HashMap;
use std::path::Path;

use nilrep_core::laurent::{LaurentPoly, LaurentRing};
use nilrep_core::Field;

use crate::catalog::*;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("line {line}, column {column}: expected {expected}")]
    SyntaxError { line: usize, column: usize, expected: String },
    #[error("line {line}: undefined {kind} `{name}`")]
    DanglingReference { line: usize, name: String, kind: String },
    #[error("line {line}: `{name}` is already defined")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: `{name}`: {error}")]
    Invalid { line: usize, name: String, error: String },
    #[error("{0}")]
    Io(String),
}

pub fn parse_catalog(path: &Path) -> Result<Catalog, CatalogError> {
    let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io(format!("{}: {e}", path.display())))?;
    parse_str(&text)
}

struct Cur<'a> {
    s: &'a str,
    pos: usize,
    line: usize,
}

type PResult<T> = Result<T, CatalogError>;

impl<'a> Cur<'a> {
    fn column_at(&self, pos: usize) -> usize {
        self.s[..pos].chars().count() + 1
    }

    fn err<T>(&self, expected: &str) -> PResult<T> {
        Err(CatalogError::SyntaxError { line: self.line, column: self.column_at(self.pos), expected: expected.into() })
    }

    fn ws(&mut self) {
        let rest = &self.s[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.s[self.pos..].chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn lit(&mut self, lit: &str) -> PResult<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.err(&format!("`{lit}`"))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        self.ws();
        let rest = &self.s[self.pos..];
        let ok = |i: usize, c: char| c.is_ascii_alphabetic() || c == '_' || (i > 0 && (c.is_ascii_digit() || c == '\''));
        let len = rest.char_indices().take_while(|&(i, c)| ok(i, c)).map(|(i, c)| i + c.len_utf8()).last().unwrap_or(0);
        if len == 0 {
            return self.err("a name");
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn int(&mut self) -> PResult<i64> {
        self.ws();
        let rest = &self.s[self.pos..];
        let sign = usize::from(rest.starts_with('-'));
        let digits = rest[sign..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return self.err("an integer");
        }
        let v = rest[..sign + digits].parse().or_else(|_| self.err("an integer in range"))?;
        self.pos += sign + digits;
        Ok(v)
    }

    fn uint(&mut self) -> PResult<u64> {
        let here = self.pos;
        let v = self.int()?;
        if v < 0 {
            self.pos = here;
            self.ws();
            return self.err("a non-negative integer");
        }
        Ok(v as u64)
    }

    /// Integer or fraction, kept as text.
    fn scalar(&mut self) -> PResult<String> {
        let n = self.int()?;
        if self.s[self.pos..].starts_with('/') {
            self.pos += 1;
            let here = self.pos;
            let d = self.int()?;
            if d <= 0 {
                self.pos = here;
                return self.err("a positive denominator");
            }
            return Ok(format!("{n}/{d}"));
        }
        Ok(n.to_string())
    }

    fn key(&mut self, k: &str) -> PResult<()> {
        self.ws();
        if self.s[self.pos..].starts_with(k) && self.s[self.pos + k.len()..].starts_with('=') {
            self.pos += k.len() + 1;
            Ok(())
        } else {
            self.err(&format!("`{k}=`"))
        }
    }

    fn end(&mut self) -> PResult<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("end of line")
        }
    }

    fn word(&mut self) -> PResult<(Word, usize)> {
        self.ws();
        let start = self.pos;
        if self.s[self.pos..].starts_with('1') && !self.s[self.pos + 1..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
            return Ok((Vec::new(), start));
        }
        let mut w = Vec::new();
        loop {
            let g = self.ident()?;
            let e = if self.s[self.pos..].starts_with('^') {
                self.pos += 1;
                self.int()?
            } else {
                1
            };
            w.push((g, e));
            if !self.s[self.pos..].starts_with('*') {
                break;
            }
            self.pos += 1;
        }
        Ok((w, start))
    }

    fn vector(&mut self) -> PResult<Vec<String>> {
        self.lit("[")?;
        let mut v = Vec::new();
        if self.eat("]") {
            return Ok(v);
        }
        loop {
            v.push(self.scalar()?);
            if self.eat("]") {
                return Ok(v);
            }
            self.lit(",")?;
        }
    }

    fn matrix(&mut self) -> PResult<Vec<Vec<String>>> {
        self.lit("[")?;
        let mut m = Vec::new();
        if self.eat("]") {
            return Ok(m);
        }
        loop {
            m.push(self.vector()?);
            if self.eat("]") {
                return Ok(m);
            }
            self.lit(",")?;
        }
    }

    fn name_list(&mut self) -> PResult<Vec<(String, usize)>> {
        self.lit("[")?;
        let mut v = Vec::new();
        if self.eat("]") {
            return Ok(v);
        }
        loop {
            self.ws();
            let at = self.pos;
            v.push((self.ident()?, at));
            if self.eat("]") {
                return Ok(v);
            }
            self.lit(",")?;
        }
    }

    /// Comma-separated raw items up to the end of the line, with their offsets.
    fn raw_items(&mut self) -> Vec<(String, usize)> {
        self.ws();
        let mut out = Vec::new();
        let mut start = self.pos;
        for (i, c) in self.s[self.pos..].char_indices() {
            if c == ',' {
                out.push((self.s[start..self.pos + i].to_string(), start));
                start = self.pos + i + 1;
            }
        }
        out.push((self.s[start..].to_string(), start));
        self.pos = self.s.len();
        out
    }
}

/// What a name refers to, for reference checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Group,
    Subgroup,
    Ring,
    Embed,
    Ideal,
    Module,
    Induce,
    IdealData,
    Case,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::Group => "group",
            Kind::Subgroup => "subgroup",
            Kind::Ring => "ring",
            Kind::Embed => "embedding",
            Kind::Ideal => "ideal",
            Kind::Module => "module",
            Kind::Induce => "induce case",
            Kind::IdealData => "ideal data",
            Kind::Case => "case",
        }
    }
}

struct State {
    cat: Catalog,
    names: HashMap<String, (Kind, usize)>,
}

impl State {
    fn define(&mut self, line: usize, kind: Kind, entry: EntryKind) -> PResult<()> {
        let name = entry.name().to_string();
        if self.names.contains_key(&name) {
            return Err(CatalogError::DuplicateName { line, name });
        }
        self.names.insert(name, (kind, self.cat.entries.len()));
        self.cat.entries.push(Entry { line, kind: entry });
        Ok(())
    }

    fn lookup(&self, line: usize, name: &str, kinds: &[Kind]) -> PResult<&EntryKind> {
        match self.names.get(name) {
            Some((k, i)) if kinds.contains(k) => Ok(&self.cat.entries[*i].kind),
            _ => Err(CatalogError::DanglingReference {
                line,
                name: name.into(),
                kind: kinds.iter().map(|k| k.label()).collect::<Vec<_>>().join(" or "),
            }),
        }
    }

    /// Generator names of the group behind a group or subgroup name.
    fn generators(&self, line: usize, name: &str) -> PResult<Vec<String>> {
        match self.lookup(line, name, &[Kind::Group, Kind::Subgroup])? {
            EntryKind::Group(g) => Ok(g.gens.clone()),
            EntryKind::Subgroup(s) => self.generators(line, &s.group.clone()),
            _ => unreachable!(),
        }
    }

    fn ring(&self, line: usize, name: &str) -> PResult<LaurentRing> {
        match self.lookup(line, name, &[Kind::Ring])? {
            EntryKind::Ring(r) => ring_of(line, r),
            _ => unreachable!(),
        }
    }

    fn last_mut(&mut self) -> Option<&mut EntryKind> {
        self.cat.entries.last_mut().map(|e| &mut e.kind)
    }
}

pub(crate) fn ring_of(line: usize, r: &RingDecl) -> PResult<LaurentRing> {
    let field = if r.characteristic == 0 {
        Field::Rationals
    } else {
        Field::prime(r.characteristic)
            .map_err(|e| CatalogError::Invalid { line, name: r.name.clone(), error: e.to_string() })?
    };
    Ok(LaurentRing::new(r.rank, field))
}

fn check_word(line: usize, gens: &[String], w: &Word) -> PResult<()> {
    match w.iter().find(|(g, _)| !gens.contains(g)) {
        Some((g, _)) => Err(CatalogError::DanglingReference { line, name: g.clone(), kind: "generator".into() }),
        None => Ok(()),
    }
}

fn field_text(c: &mut Cur, allow_z: bool) -> PResult<String> {
    c.ws();
    if c.eat("GF(") {
        let p = c.uint()?;
        c.lit(")")?;
        return Ok(format!("GF({p})"));
    }
    if c.eat("Q") && !allow_z {
        return Ok("Q".into());
    }
    if allow_z && c.eat("Z") {
        return Ok("Z".into());
    }
    c.err(if allow_z { "`Z` or `GF(p)`" } else { "`Q` or `GF(p)`" })
}

/// `c`, `c*w`, `w`, joined by `+`/`-`.
fn ring_text(c: &mut Cur, gens: &[String]) -> PResult<RingText> {
    let mut out = Vec::new();
    let mut neg = c.eat("-");
    loop {
        c.ws();
        let coeff_first = c.s[c.pos..].starts_with(|ch: char| ch.is_ascii_digit());
        let (k, w) = if coeff_first {
            let k = c.uint()?;
            if c.eat("*") {
                let (w, _) = c.word()?;
                (k, w)
            } else {
                (k, Vec::new())
            }
        } else {
            let (w, _) = c.word()?;
            (1, w)
        };
        check_word(c.line, gens, &w)?;
        out.push((if neg { format!("-{k}") } else { k.to_string() }, w));
        match c.peek() {
            Some('+') => {
                c.pos += 1;
                neg = false;
            }
            Some('-') => {
                c.pos += 1;
                neg = true;
            }
            _ => return Ok(out),
        }
    }
}

pub fn parse_str(text: &str) -> Result<Catalog, CatalogError> {
    let mut st = State { cat: Catalog::default(), names: HashMap::new() };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut c = Cur { s: raw, pos: 0, line };
        c.ws();
        let head_at = c.pos;
        let head = c.ident()?;
        match head.as_str() {
            "group" => {
                let name = c.ident()?;
                c.end()?;
                let g = GroupDecl { name, gens: Vec::new(), pows: Vec::new(), conjs: Vec::new(), class: None };
                st.define(line, Kind::Group, EntryKind::Group(g))?;
            }
            "gens" | "pow" | "conj" | "class" => group_line(&mut st, &mut c, &head, head_at)?,
            "subgroup" => {
                let name = c.ident()?;
                c.lit("of")?;
                let group = c.ident()?;
                let gens = st.generators(line, &group)?;
                st.lookup(line, &group, &[Kind::Group])?;
                c.lit("=")?;
                let mut ws = Vec::new();
                loop {
                    let (w, _) = c.word()?;
                    check_word(line, &gens, &w)?;
                    ws.push(w);
                    if !c.eat(",") {
                        break;
                    }
                }
                c.end()?;
                st.define(line, Kind::Subgroup, EntryKind::Subgroup(SubgroupDecl { name, group, gens: ws }))?;
            }
            "ring" => {
                let name = c.ident()?;
                c.key("rank")?;
                let rank = c.uint()? as usize;
                c.key("char")?;
                let characteristic = c.uint()?;
                c.end()?;
                let r = RingDecl { name, rank, characteristic };
                ring_of(line, &r)?;
                st.define(line, Kind::Ring, EntryKind::Ring(r))?;
            }
            "embed" => {
                let name = c.ident()?;
                c.lit("in")?;
                let ring = c.ident()?;
                let r = st.ring(line, &ring)?;
                c.lit("=")?;
                c.lit("[")?;
                let mut rows = vec![Vec::new()];
                while !c.eat("]") {
                    if c.eat(";") {
                        rows.push(Vec::new());
                    } else {
                        let v = c.int()?;
                        rows.last_mut().expect("row").push(v);
                    }
                }
                c.end()?;
                if rows.len() != r.rank || rows.iter().any(|row| row.len() != r.rank) {
                    return Err(CatalogError::Invalid {
                        line,
                        name,
                        error: format!("embedding must be {0}x{0}", r.rank),
                    });
                }
                st.define(line, Kind::Embed, EntryKind::Embed(EmbedDecl { name, ring, rows }))?;
            }
            "ideal" => {
                let name = c.ident()?;
                c.lit("in")?;
                let ring = c.ident()?;
                let r = st.ring(line, &ring)?;
                c.lit("=")?;
                let mut gens = Vec::new();
                for (item, at) in c.raw_items() {
                    let t = item.trim();
                    let lead = item.len() - item.trim_start().len();
                    if let Err(e) = LaurentPoly::parse(r, t) {
                        return Err(CatalogError::SyntaxError {
                            line,
                            column: c.column_at(at + lead) + e.column,
                            expected: e.expected,
                        });
                    }
                    gens.push(t.to_string());
                }
                st.define(line, Kind::Ideal, EntryKind::Ideal(IdealDecl { name, ring, gens }))?;
            }
            "module" => {
                let name = c.ident()?;
                c.lit("over")?;
                let over = c.ident()?;
                st.lookup(line, &over, &[Kind::Group, Kind::Subgroup])?;
                c.key("field")?;
                let field = field_text(&mut c, false)?;
                c.key("dim")?;
                let dim = c.uint()? as usize;
                c.end()?;
                let m = ModuleDecl { name, over, field, dim, acts: Vec::new() };
                st.define(line, Kind::Module, EntryKind::Module(m))?;
            }
            "act" => {
                let Some(EntryKind::Module(m)) = st.last_mut() else {
                    return Err(CatalogError::SyntaxError { line, column: 1, expected: "`act` right after a module".into() });
                };
                let over = m.over.clone();
                let (w, _) = c.word()?;
                c.lit("=")?;
                let mat = c.matrix()?;
                c.end()?;
                let gens = st.generators(line, &over)?;
                check_word(line, &gens, &w)?;
                if let Some(EntryKind::Module(m)) = st.last_mut() {
                    m.acts.push((w, mat));
                }
            }
            "inducecase" => {
                let name = c.ident()?;
                c.key("base")?;
                let base = c.ident()?;
                st.lookup(line, &base, &[Kind::Module])?;
                c.key("sub")?;
                let sub = c.ident()?;
                st.lookup(line, &sub, &[Kind::Subgroup, Kind::Group])?;
                c.key("group")?;
                let group = c.ident()?;
                st.lookup(line, &group, &[Kind::Group, Kind::Subgroup])?;
                c.end()?;
                st.define(line, Kind::Induce, EntryKind::Induce(InduceDecl { name, base, sub, group }))?;
            }
            "idealdata" => {
                let name = c.ident()?;
                c.key("K")?;
                let k = c.ident()?;
                let gens = st.generators(line, &k)?;
                c.key("R")?;
                let ring = field_text(&mut c, true)?;
                c.lit("gens")?;
                c.lit("=")?;
                let mut elems = Vec::new();
                loop {
                    elems.push(ring_text(&mut c, &gens)?);
                    if !c.eat(",") {
                        break;
                    }
                }
                c.end()?;
                st.define(line, Kind::IdealData, EntryKind::IdealData(IdealDataDecl { name, k, ring, gens: elems }))?;
            }
            "lemma7" | "lemma8" | "culling" | "prop3" | "prop4" | "descent" => {
                let case = case_line(&st, &mut c, &head)?;
                st.define(line, Kind::Case, EntryKind::Case(case))?;
            }
            _ => {
                c.pos = head_at;
                return c.err("an entry keyword");
            }
        }
    }
    Ok(st.cat)
}

fn group_line(st: &mut State, c: &mut Cur, head: &str, head_at: usize) -> PResult<()> {
    let line = c.line;
    let Some(EntryKind::Group(g)) = st.last_mut() else {
        c.pos = head_at;
        return c.err(&format!("`{head}` right after a group"));
    };
    match head {
        "gens" => {
            if !g.gens.is_empty() {
                c.pos = head_at;
                return c.err("a single `gens` line");
            }
            while !c.at_end() {
                let x = c.ident()?;
                if g.gens.contains(&x) {
                    return Err(CatalogError::DuplicateName { line, name: x });
                }
                g.gens.push(x);
            }
        }
        "pow" => {
            let x = c.ident()?;
            c.lit("^")?;
            let e = c.uint()?;
            c.lit("=")?;
            let (w, _) = c.word()?;
            c.end()?;
            check_word(line, &g.gens, &[(x.clone(), 1)].to_vec())?;
            check_word(line, &g.gens, &w)?;
            g.pows.push((x, e, w));
        }
        "conj" => {
            let x = c.ident()?;
            c.lit("^")?;
            let y = c.ident()?;
            c.lit("=")?;
            let (w, _) = c.word()?;
            c.end()?;
            check_word(line, &g.gens, &vec![(x.clone(), 1), (y.clone(), 1)])?;
            check_word(line, &g.gens, &w)?;
            g.conjs.push((x, y, w));
        }
        _ => {
            let k = c.uint()? as usize;
            c.end()?;
            g.class = Some(k);
        }
    }
    Ok(())
}

fn case_line(st: &State, c: &mut Cur, head: &str) -> PResult<CaseDecl> {
    let line = c.line;
    let name = c.ident()?;
    let named = |c: &mut Cur, key: &str, kinds: &[Kind]| -> PResult<String> {
        c.key(key)?;
        let v = c.ident()?;
        st.lookup(line, &v, kinds)?;
        Ok(v)
    };
    let body = match head {
        "lemma7" => CaseBody::Lemma7 { ideal: named(c, "ideal", &[Kind::Ideal])?, embed: named(c, "embed", &[Kind::Embed])? },
        "lemma8" => CaseBody::Lemma8 {
            ideal: named(c, "ideal", &[Kind::Ideal])?,
            embed: named(c, "embed", &[Kind::Embed])?,
            prime: named(c, "prime", &[Kind::Ideal])?,
        },
        "culling" => {
            let data = named(c, "data", &[Kind::IdealData])?;
            let module = named(c, "module", &[Kind::Module])?;
            c.key("u")?;
            CaseBody::Culling { data, module, u: c.matrix()? }
        }
        "prop3" => CaseBody::Prop3 { module: named(c, "module", &[Kind::Module])? },
        "prop4" => {
            let induce = named(c, "induce", &[Kind::Induce])?;
            let data = named(c, "data", &[Kind::IdealData])?;
            c.key("d")?;
            CaseBody::Prop4 { induce, data, d: c.vector()? }
        }
        _ => {
            let ring = named(c, "ring", &[Kind::Ring])?;
            c.key("chain")?;
            let mut chain = Vec::new();
            for (e, _) in c.name_list()? {
                st.lookup(line, &e, &[Kind::Embed])?;
                chain.push(e);
            }
            c.key("ideals")?;
            let mut ideals = Vec::new();
            for (e, _) in c.name_list()? {
                st.lookup(line, &e, &[Kind::Ideal])?;
                ideals.push(e);
            }
            CaseBody::Descent { ring, chain, ideals }
        }
    };
    let expect = if c.at_end() {
        None
    } else {
        c.key("expect")?;
        let v = c.s[c.pos..].trim().to_string();
        if v.is_empty() {
            return c.err("an expected verdict");
        }
        c.pos = c.s.len();
        Some(v)
    };
    Ok(CaseDecl { name, body, expect })
}
