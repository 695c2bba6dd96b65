//! Presentations of `H₀` of the cobar construction, localization at marks and
//! a bounded Knuth–Bendix word-problem solver.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::dgcobar::DgCoalgebra;
use crate::error::{Error, Result};
use crate::simplicial::{SimplexRef, SimplicialMap, SimplicialSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn inv(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    fn code(self) -> u32 {
        2 * self.gen as u32 + self.inverse as u32
    }

    fn from_code(c: u32) -> Self {
        Letter { gen: (c / 2) as usize, inverse: c % 2 == 1 }
    }
}

pub type PWord = Vec<Letter>;

pub fn inverse_word(w: &[Letter]) -> PWord {
    w.iter().rev().map(|l| l.inverted()).collect()
}

/// Generators, relations `left = right` and the marked generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H0Presentation {
    pub generators: Vec<String>,
    pub relations: Vec<(PWord, PWord)>,
    pub marked: Vec<usize>,
    pub localized: bool,
    /// Read off a reduced simplicial set rather than a general coalgebra.
    pub chains_type: bool,
}

fn edge_word(x: &SimplexRef) -> PWord {
    if x.is_degenerate() {
        Vec::new()
    } else {
        vec![Letter::gen(x.base.index)]
    }
}

/// Edge-path presentation of a reduced simplicial set: one generator per
/// nondegenerate edge and `d₁σ = d₂σ · d₀σ` per nondegenerate 2-simplex,
/// dropping relations that read `w = w`.
pub fn edge_presentation(x: &SimplicialSet) -> Result<H0Presentation> {
    if x.nd_count(0) != 1 {
        return Err(Error::NotReduced("edge presentation".into()));
    }
    let generators = x.nondegenerate(1).iter().map(|s| s.name.clone()).collect();
    let relations = x
        .nondegenerate(2)
        .iter()
        .map(|s| {
            let mut right = edge_word(&s.faces[2]);
            right.extend(edge_word(&s.faces[0]));
            (edge_word(&s.faces[1]), right)
        })
        .filter(|(l, r)| l != r)
        .collect();
    Ok(H0Presentation { generators, relations, marked: Vec::new(), localized: false, chains_type: true })
}

/// `H₀(Ω(D))` for `D = 𝒩_*(F[X])`. Other inputs are not decided.
pub fn h0_presentation(d: &DgCoalgebra) -> Result<H0Presentation> {
    let x = d.origin().ok_or_else(|| {
        Error::Inconclusive("H₀ presentation is only read off for chains on a simplicial set".into())
    })?;
    edge_presentation(x)
}

/// Monoid-like generators: all of them for chains type.
pub fn marked_elements(p: &H0Presentation) -> Result<Vec<usize>> {
    if !p.chains_type {
        return Err(Error::Inconclusive("monoid-like detection needs a chains-type presentation".into()));
    }
    Ok((0..p.generators.len()).collect())
}

/// Adds `g⁻¹` with `g g⁻¹ = 1 = g⁻¹ g` for every mark.
pub fn localize_h0(p: &H0Presentation) -> H0Presentation {
    let mut out = p.clone();
    for &g in &p.marked {
        out.relations.push((vec![Letter::gen(g), Letter::inv(g)], Vec::new()));
        out.relations.push((vec![Letter::inv(g), Letter::gen(g)], Vec::new()));
    }
    out.localized = true;
    out
}

/// Presentation, marks and localization in one step.
pub fn localized_presentation(d: &DgCoalgebra) -> Result<H0Presentation> {
    let mut p = h0_presentation(d)?;
    p.marked = marked_elements(&p)?;
    Ok(localize_h0(&p))
}

impl H0Presentation {
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter()
            .map(|l| if l.inverse { format!("{}^-1", self.generators[l.gen]) } else { self.generators[l.gen].clone() })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn parse_word(&self, s: &str) -> Result<PWord> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Vec::new());
        }
        s.split('*')
            .map(|tok| {
                let tok = tok.trim();
                let (name, inverse) = match tok.strip_suffix("^-1") {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                let gen = self
                    .generators
                    .iter()
                    .position(|g| g == name)
                    .ok_or_else(|| Error::Parse(format!("unknown generator {name:?}")))?;
                Ok(Letter { gen, inverse })
            })
            .collect()
    }

    /// Parses `< a, b | b = a*a, a = a*b >`.
    pub fn parse(s: &str) -> Result<H0Presentation> {
        let body = s
            .trim()
            .strip_prefix('<')
            .and_then(|r| r.strip_suffix('>'))
            .ok_or_else(|| Error::Parse("presentation must be enclosed in < >".into()))?;
        let (gens, rels) = body.split_once('|').ok_or_else(|| Error::Parse("missing '|'".into()))?;
        let generators: Vec<String> =
            gens.split(',').map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect();
        let mut p =
            H0Presentation { generators, relations: Vec::new(), marked: Vec::new(), localized: false, chains_type: false };
        for rel in rels.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let (l, r) = rel.split_once('=').ok_or_else(|| Error::Parse(format!("relation {rel:?} lacks '='")))?;
            let pair = (p.parse_word(l)?, p.parse_word(r)?);
            p.localized |= pair.0.iter().chain(&pair.1).any(|l| l.inverse);
            p.relations.push(pair);
        }
        Ok(p)
    }

    /// The generators and relations of `self` followed by those of `other`, reindexed.
    pub fn free_product(&self, other: &H0Presentation) -> H0Presentation {
        let shift = self.generators.len();
        let mv = |w: &PWord| w.iter().map(|l| Letter { gen: l.gen + shift, inverse: l.inverse }).collect::<PWord>();
        let mut out = self.clone();
        out.generators.extend(other.generators.iter().cloned());
        out.relations.extend(other.relations.iter().map(|(l, r)| (mv(l), mv(r))));
        out.marked.extend(other.marked.iter().map(|g| g + shift));
        out.localized |= other.localized;
        out.chains_type &= other.chains_type;
        out
    }
}

impl fmt::Display for H0Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(l, r)| format!("{} = {}", self.format_word(l), self.format_word(r)))
            .collect();
        let gens = self.generators.join(", ");
        match (gens.is_empty(), rels.is_empty()) {
            (true, true) => write!(f, "< | >"),
            (false, true) => write!(f, "< {gens} | >"),
            (true, false) => write!(f, "< | {} >", rels.join(", ")),
            (false, false) => write!(f, "< {gens} | {} >", rels.join(", ")),
        }
    }
}

/// Images of the generators of `edge_presentation(source)` under `f`.
pub fn presentation_map(f: &SimplicialMap) -> Vec<PWord> {
    (0..f.source().nd_count(1))
        .map(|i| edge_word(f.image_of(crate::simplicial::NdRef { dim: 1, index: i })))
        .collect()
}

pub fn map_word(images: &[PWord], w: &[Letter]) -> PWord {
    w.iter()
        .flat_map(|l| if l.inverse { inverse_word(&images[l.gen]) } else { images[l.gen].clone() })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionBounds {
    pub max_rules: usize,
    pub max_steps: usize,
}

impl Default for CompletionBounds {
    fn default() -> Self {
        CompletionBounds { max_rules: 200, max_steps: 5000 }
    }
}

/// A confluent length-lexicographic rewriting system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    rules: Vec<(Vec<u32>, Vec<u32>)>,
    /// Letters removed by `g = w` relations before completion.
    eliminated: BTreeMap<u32, Vec<u32>>,
}

fn expand(eliminated: &BTreeMap<u32, Vec<u32>>, w: &[u32]) -> Vec<u32> {
    w.iter().flat_map(|c| eliminated.get(c).cloned().unwrap_or_else(|| vec![*c])).collect()
}

fn inverse_code(w: &[u32]) -> Vec<u32> {
    w.iter().rev().map(|c| c ^ 1).collect()
}

/// Tietze elimination of generators defined by a relation `g = w` with `g` absent from `w`.
fn eliminate(mut rels: Vec<(Vec<u32>, Vec<u32>)>) -> (Vec<(Vec<u32>, Vec<u32>)>, BTreeMap<u32, Vec<u32>>) {
    let mut eliminated: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    loop {
        let present: BTreeSet<u32> = rels.iter().flat_map(|(l, r)| l.iter().chain(r)).copied().collect();
        let pick = rels.iter().enumerate().find_map(|(i, (l, r))| {
            [(l, r), (r, l)].into_iter().find_map(|(a, b)| {
                let g = *a.first()?;
                let ok = a.len() == 1
                    && g % 2 == 0
                    && !b.iter().any(|c| c / 2 == g / 2)
                    && (!present.contains(&(g ^ 1)) || b.iter().all(|c| present.contains(&(c ^ 1))));
                ok.then(|| (i, g, b.clone()))
            })
        });
        let Some((i, g, w)) = pick else { break };
        rels.remove(i);
        let mut sub = BTreeMap::new();
        sub.insert(g, w.clone());
        sub.insert(g ^ 1, inverse_code(&w));
        for v in eliminated.values_mut() {
            *v = expand(&sub, v);
        }
        eliminated.extend(sub);
        rels = rels.into_iter().map(|(l, r)| (expand(&eliminated, &l), expand(&eliminated, &r))).collect();
    }
    (rels, eliminated)
}

fn shortlex(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

fn find(hay: &[u32], needle: &[u32]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| hay[i..i + needle.len()] == *needle)
}

fn reduce(rules: &[(Vec<u32>, Vec<u32>)], w: &[u32]) -> Vec<u32> {
    let mut w = w.to_vec();
    'outer: loop {
        for (l, r) in rules {
            if let Some(i) = find(&w, l) {
                let mut next = w[..i].to_vec();
                next.extend(r);
                next.extend(&w[i + l.len()..]);
                w = next;
                continue 'outer;
            }
        }
        return w;
    }
}

fn critical_pairs(a: &(Vec<u32>, Vec<u32>), b: &(Vec<u32>, Vec<u32>)) -> Vec<(Vec<u32>, Vec<u32>)> {
    let (l1, r1) = a;
    let (l2, r2) = b;
    let mut out = Vec::new();
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let mut x = r1.clone();
            x.extend(&l2[k..]);
            let mut y = l1[..l1.len() - k].to_vec();
            y.extend(r2);
            out.push((x, y));
        }
    }
    out
}

impl RewriteSystem {
    /// Knuth–Bendix completion of the relations; `Inconclusive` past the bounds.
    pub fn complete(p: &H0Presentation, bounds: CompletionBounds) -> Result<RewriteSystem> {
        let code = |w: &PWord| w.iter().map(|l| l.code()).collect::<Vec<u32>>();
        let (rels, eliminated) = eliminate(p.relations.iter().map(|(l, r)| (code(l), code(r))).collect());
        let mut queue: VecDeque<(Vec<u32>, Vec<u32>)> = rels.into();
        let mut rules: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        let mut steps = 0;
        while let Some((u, v)) = queue.pop_front() {
            steps += 1;
            if steps > bounds.max_steps || rules.len() > bounds.max_rules {
                return Err(Error::Inconclusive(format!(
                    "completion exceeded {} rules or {} steps",
                    bounds.max_rules, bounds.max_steps
                )));
            }
            let u = reduce(&rules, &u);
            let v = reduce(&rules, &v);
            let rule = match shortlex(&u, &v) {
                Ordering::Equal => continue,
                Ordering::Greater => (u, v),
                Ordering::Less => (v, u),
            };
            let mut kept = Vec::new();
            for (l, r) in rules.drain(..) {
                if find(&l, &rule.0).is_some() {
                    queue.push_back((l, r));
                } else {
                    kept.push((l, r));
                }
            }
            rules = kept;
            rules.push(rule.clone());
            for i in 0..rules.len() {
                let r = reduce(&rules, &rules[i].1);
                rules[i].1 = r;
            }
            let new = rules.last().unwrap().clone();
            for other in rules.clone() {
                queue.extend(critical_pairs(&new, &other));
                queue.extend(critical_pairs(&other, &new));
            }
        }
        rules.sort_by(|a, b| shortlex(&a.0, &b.0));
        Ok(RewriteSystem { rules, eliminated })
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn normal_form(&self, w: &[Letter]) -> PWord {
        let c: Vec<u32> = w.iter().map(|l| l.code()).collect();
        reduce(&self.rules, &expand(&self.eliminated, &c)).into_iter().map(Letter::from_code).collect()
    }

    fn irreducible_step(&self, state: &[u32], c: u32) -> Option<Vec<u32>> {
        let mut v = state.to_vec();
        v.push(c);
        if self.rules.iter().any(|(lhs, _)| v.ends_with(lhs)) {
            return None;
        }
        let keep = self.rules.iter().map(|(l, _)| l.len()).max().unwrap_or(1).saturating_sub(1);
        Some(v[v.len().saturating_sub(keep)..].to_vec())
    }

    /// Whether finitely many words over `letters` are irreducible: no cycle in the
    /// automaton whose states are the last `max lhs − 1` letters.
    pub fn has_finitely_many_normal_forms(&self, letters: &[Letter]) -> bool {
        let codes: Vec<u32> = letters.iter().map(|l| l.code()).filter(|c| !self.eliminated.contains_key(c)).collect();
        // 1 = on the DFS stack, 2 = finished.
        let mut color: HashMap<Vec<u32>, u8> = HashMap::new();
        let mut stack: Vec<(Vec<u32>, usize)> = vec![(Vec::new(), 0)];
        color.insert(Vec::new(), 1);
        while let Some((state, next)) = stack.pop() {
            if next == codes.len() {
                color.insert(state, 2);
                continue;
            }
            stack.push((state.clone(), next + 1));
            if let Some(t) = self.irreducible_step(&state, codes[next]) {
                match color.get(&t) {
                    Some(1) => return false,
                    Some(_) => {}
                    None => {
                        color.insert(t.clone(), 1);
                        stack.push((t, 0));
                    }
                }
            }
        }
        true
    }

    /// All irreducible words over `letters`, when they are finitely many and
    /// none is longer than `max_len`.
    pub fn normal_forms(&self, letters: &[Letter], max_len: usize) -> Option<Vec<PWord>> {
        if !self.has_finitely_many_normal_forms(letters) {
            return None;
        }
        let codes: Vec<u32> = letters.iter().map(|l| l.code()).filter(|c| !self.eliminated.contains_key(c)).collect();
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Vec<u32>> = vec![Vec::new()];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for w in &layer {
                for &c in &codes {
                    let mut v = w.clone();
                    v.push(c);
                    if self.rules.iter().all(|(lhs, _)| !v.ends_with(lhs)) {
                        next.push(v);
                    }
                }
            }
            if next.first().is_some_and(|w| w.len() > max_len) {
                return None;
            }
            out.extend(next.iter().map(|w| w.iter().map(|&c| Letter::from_code(c)).collect()));
            layer = next;
        }
        Some(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Normal(PWord),
    Inconclusive(String),
}

pub fn word_problem_normalize(p: &H0Presentation, w: &[Letter]) -> Normalized {
    word_problem_normalize_with(p, w, CompletionBounds::default())
}

pub fn word_problem_normalize_with(p: &H0Presentation, w: &[Letter], bounds: CompletionBounds) -> Normalized {
    match RewriteSystem::complete(p, bounds) {
        Ok(sys) => Normalized::Normal(sys.normal_form(w)),
        Err(e) => Normalized::Inconclusive(e.to_string()),
    }
}

/// Letters of a presentation: generators, plus inverses once localized.
pub fn alphabet(p: &H0Presentation) -> Vec<Letter> {
    let mut out: Vec<Letter> = (0..p.generators.len()).map(Letter::gen).collect();
    if p.localized {
        let marked: BTreeSet<usize> = p.marked.iter().copied().collect();
        let inverted: BTreeSet<usize> =
            p.relations.iter().flat_map(|(l, r)| l.iter().chain(r)).filter(|l| l.inverse).map(|l| l.gen).collect();
        out.extend(marked.union(&inverted).map(|&g| Letter::inv(g)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    #[test]
    fn model_presentations() {
        assert_eq!(edge_presentation(&models::s1()).unwrap().to_string(), "< a | >");
        assert_eq!(edge_presentation(&models::s2()).unwrap().to_string(), "< | >");
        assert_eq!(edge_presentation(&models::rp2()).unwrap().to_string(), "< a, b | b = a*a, a = a*b >");
    }

    #[test]
    fn parse_round_trip() {
        let s = "< a, b | b = a*a, a = a*b, a*a^-1 = 1 >";
        let p = H0Presentation::parse(s).unwrap();
        assert_eq!(p.to_string(), s);
        assert!(p.localized);
        assert!(H0Presentation::parse("a, b | b = a").is_err());
        assert!(H0Presentation::parse("< a | c = a >").is_err());
    }

    fn localized(x: &SimplicialSet) -> H0Presentation {
        let mut p = edge_presentation(x).unwrap();
        p.marked = marked_elements(&p).unwrap();
        localize_h0(&p)
    }

    #[test]
    fn normal_forms_of_models() {
        let s1 = localized(&models::s1());
        assert_eq!(s1.to_string(), "< a | a*a^-1 = 1, a^-1*a = 1 >");
        let w = s1.parse_word("a*a^-1*a").unwrap();
        assert_eq!(word_problem_normalize(&s1, &w), Normalized::Normal(vec![Letter::gen(0)]));
        let rp2 = localized(&models::rp2());
        let aa = rp2.parse_word("a*a").unwrap();
        assert_eq!(word_problem_normalize(&rp2, &aa), Normalized::Normal(vec![]));
        let sys = RewriteSystem::complete(&rp2, CompletionBounds::default()).unwrap();
        assert_eq!(sys.normal_forms(&alphabet(&rp2), 8).unwrap().len(), 2);
    }

    #[test]
    fn runaway_completion_is_inconclusive() {
        // Baumslag–Solitar BS(1,2): no finite complete system in this ordering.
        let p = H0Presentation::parse("< a, b | a*b*a^-1 = b*b, a*a^-1 = 1, a^-1*a = 1, b*b^-1 = 1, b^-1*b = 1 >").unwrap();
        let bounds = CompletionBounds { max_rules: 20, max_steps: 200 };
        assert!(matches!(word_problem_normalize_with(&p, &[], bounds), Normalized::Inconclusive(_)));
    }
}
