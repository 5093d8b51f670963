//! Labelled diagrams and rule-based rewriting.
//!
//! A diagram is a molecule with a total labelling of its elements; a rule
//! is a cell one dimension up, whose input and output boundaries are the
//! two sides of the rewrite.  Applying a rule glues the rule cell onto the
//! matched subdiagram and takes the output boundary, so a whole run can be
//! recorded as a single diagram of cells one dimension above the data —
//! the trace composite.

use crate::error::{Error, Result};
use crate::matching::{match_subdiagram, Match, SubdiagramMatch};
use crate::molecule::{canonicalize, Molecule};
use crate::ogposet::{Element, Inclusion, Orientation};
use crate::submolecule::{is_rewritable_submolecule, DecisionMode};
use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

/// An interned label; equality is a pointer comparison in the common case.
#[derive(Clone, Eq)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(text: &str) -> Label {
        static INTERNER: OnceLock<Mutex<HashSet<Arc<str>>>> = OnceLock::new();
        let mut pool = INTERNER
            .get_or_init(|| Mutex::new(HashSet::new()))
            .lock()
            .expect("interner lock");
        if let Some(hit) = pool.get(text) {
            return Label(Arc::clone(hit));
        }
        let entry: Arc<str> = Arc::from(text);
        pool.insert(Arc::clone(&entry));
        Label(entry)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl std::hash::Hash for Label {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", &*self.0)
    }
}

/// A molecule with a total labelling of its elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Diagram {
    shape: Molecule,
    labels: Vec<Vec<Label>>,
}

impl Diagram {
    pub fn new(shape: Molecule, labels: Vec<Vec<Label>>) -> Result<Diagram> {
        for (d, grade) in shape.poset().face_data().iter().enumerate() {
            let got = labels.get(d).map_or(0, |l| l.len());
            if got != grade.len() {
                return Err(Error::MissingLabel(Element::new(d, got.min(grade.len()))));
            }
        }
        Ok(Diagram { shape, labels })
    }

    /// Labels every element with the same label.
    pub fn constant(shape: Molecule, label: &Label) -> Diagram {
        let labels = shape
            .poset()
            .face_data()
            .iter()
            .map(|g| vec![label.clone(); g.len()])
            .collect();
        Diagram { shape, labels }
    }

    pub fn shape(&self) -> &Molecule {
        &self.shape
    }

    pub fn dim(&self) -> isize {
        self.shape.dim()
    }

    pub fn label(&self, e: Element) -> &Label {
        &self.labels[e.dim()][e.index()]
    }

    pub fn labels(&self) -> &[Vec<Label>] {
        &self.labels
    }

    /// Pulls labels back along an inclusion into this diagram's shape.
    pub fn restrict(&self, view: &Molecule, incl: &Inclusion) -> Diagram {
        let labels = view
            .poset()
            .face_data()
            .iter()
            .enumerate()
            .map(|(d, g)| {
                (0..g.len())
                    .map(|i| self.label(incl.apply(Element::new(d, i))).clone())
                    .collect()
            })
            .collect();
        Diagram {
            shape: view.clone(),
            labels,
        }
    }

    /// The boundary restriction `∂ₙᵅt`.
    pub fn boundary(&self, n: Option<isize>, side: Orientation) -> Result<Diagram> {
        let subset = self.shape.boundary_subset(n, side);
        let (view, incl) = self.shape.materialize(&subset)?;
        Ok(self.restrict(&view, &incl))
    }

    /// Labelled pasting: shapes paste, labels follow the legs (which agree
    /// on the shared boundary whenever both diagrams restrict equally).
    pub fn paste(&self, other: &Diagram, k: usize) -> Result<Diagram> {
        let (shape, left, right) = self.shape.paste_with_witnesses(&other.shape, k)?;
        let mut labels: Vec<Vec<Option<Label>>> = shape
            .poset()
            .face_data()
            .iter()
            .map(|g| vec![None; g.len()])
            .collect();
        for e in self.shape.poset().elements() {
            let img = left.apply(e);
            labels[img.dim()][img.index()] = Some(self.label(e).clone());
        }
        for e in other.shape.poset().elements() {
            let img = right.apply(e);
            let slot = &mut labels[img.dim()][img.index()];
            match slot {
                Some(existing) if existing != other.label(e) => {
                    return Err(Error::InvalidMatch);
                }
                _ => *slot = Some(other.label(e).clone()),
            }
        }
        let labels = labels
            .into_iter()
            .map(|g| g.into_iter().map(|l| l.expect("legs jointly cover")).collect())
            .collect();
        Ok(Diagram { shape, labels })
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({:?}, labels ", self.shape)?;
        let mut first = true;
        for (d, grade) in self.labels.iter().enumerate() {
            for (i, l) in grade.iter().enumerate() {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "({d},{i})={l}")?;
            }
        }
        write!(f, ")")
    }
}

/// A rewrite rule: a cell one dimension above the diagrams it rewrites,
/// with its two boundary restrictions cached.
#[derive(Clone)]
pub struct Rule {
    name: String,
    cell: Diagram,
    lhs: Diagram,
    lhs_incl: Inclusion,
    rhs: Diagram,
}

impl Rule {
    pub fn new(name: impl Into<String>, cell: Diagram) -> Result<Rule> {
        if !cell.shape.is_atom() {
            return Err(Error::RuleDimension);
        }
        let lhs_subset = cell.shape.boundary_subset(None, Orientation::Input);
        let (lhs_view, lhs_incl) = cell.shape.materialize(&lhs_subset)?;
        let lhs = cell.restrict(&lhs_view, &lhs_incl);
        let rhs_subset = cell.shape.boundary_subset(None, Orientation::Output);
        let (rhs_view, rhs_incl) = cell.shape.materialize(&rhs_subset)?;
        let rhs = cell.restrict(&rhs_view, &rhs_incl);
        Ok(Rule {
            name: name.into(),
            cell,
            lhs,
            lhs_incl,
            rhs,
        })
    }

    /// The rule with its sides swapped.
    pub fn reversed(&self, name: impl Into<String>) -> Result<Rule> {
        let (shape, src_leg, tgt_leg) =
            Molecule::atom_with_witnesses(self.rhs.shape(), self.lhs.shape())?;
        let mut labels: Vec<Vec<Option<Label>>> = shape
            .poset()
            .face_data()
            .iter()
            .map(|g| vec![None; g.len()])
            .collect();
        for e in self.rhs.shape().poset().elements() {
            let img = src_leg.apply(e);
            labels[img.dim()][img.index()] = Some(self.rhs.label(e).clone());
        }
        for e in self.lhs.shape().poset().elements() {
            let img = tgt_leg.apply(e);
            labels[img.dim()][img.index()] = Some(self.lhs.label(e).clone());
        }
        let top = Element::new(shape.dim() as usize, 0);
        labels[top.dim()][top.index()] =
            Some(self.cell.label(Element::new(top.dim(), 0)).clone());
        let labels: Vec<Vec<Label>> = labels
            .into_iter()
            .map(|g| g.into_iter().map(|l| l.expect("covered")).collect())
            .collect();
        Rule::new(name, Diagram::new(shape, labels)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cell(&self) -> &Diagram {
        &self.cell
    }

    pub fn lhs(&self) -> &Diagram {
        &self.lhs
    }

    pub fn rhs(&self) -> &Diagram {
        &self.rhs
    }
}

/// One rule application: the step diagram (the rule cell glued onto the
/// match, one dimension up) and the rewritten diagram (its output
/// boundary).
pub struct Application {
    pub step: Diagram,
    pub result: Diagram,
}

/// Applies `rule` at a match of its left-hand side in `target`.
pub fn apply(target: &Diagram, rule: &Rule, at: &Match) -> Result<Application> {
    if **at.inclusion.target() != **target.shape.poset() {
        return Err(Error::StaleMatch);
    }
    if **at.inclusion.source() != **rule.lhs.shape().poset() {
        return Err(Error::InvalidMatch);
    }
    let labels_agree = rule
        .lhs
        .shape()
        .poset()
        .elements()
        .all(|e| rule.lhs.label(e) == target.label(at.inclusion.apply(e)));
    if !labels_agree {
        return Err(Error::InvalidMatch);
    }
    let (ok, _) = is_rewritable_submolecule(&target.shape, &at.inclusion, DecisionMode::Auto)?;
    if !ok {
        return Err(Error::NotSubmolecule);
    }

    // the step shape: U ∪ (V ⇒ W) over the shared V
    let (raw_step, base_leg, cell_leg) =
        crate::ogposet::pushout_of_inclusions(&at.inclusion, &rule.lhs_incl)?;
    let (step_poset, relabel, iterations) = canonicalize(&raw_step)?;
    let relabel = Inclusion::new_unchecked(relabel);
    let base_leg = base_leg.compose(&relabel)?;
    let cell_leg = cell_leg.compose(&relabel)?;
    let step_shape = Molecule::from_view(step_poset, iterations);

    let mut labels: Vec<Vec<Option<Label>>> = step_shape
        .poset()
        .face_data()
        .iter()
        .map(|g| vec![None; g.len()])
        .collect();
    for e in target.shape.poset().elements() {
        let img = base_leg.apply(e);
        labels[img.dim()][img.index()] = Some(target.label(e).clone());
    }
    for e in rule.cell.shape().poset().elements() {
        let img = cell_leg.apply(e);
        let slot = &mut labels[img.dim()][img.index()];
        debug_assert!(slot
            .as_ref()
            .is_none_or(|existing| existing == rule.cell.label(e)));
        *slot = Some(rule.cell.label(e).clone());
    }
    let labels: Vec<Vec<Label>> = labels
        .into_iter()
        .map(|g| g.into_iter().map(|l| l.expect("legs jointly cover")).collect())
        .collect();
    let step = Diagram::new(step_shape, labels)?;

    let result_subset = step.shape.boundary_subset(None, Orientation::Output);
    let (result_view, result_incl) = step.shape.materialize(&result_subset)?;
    let result = step.restrict(&result_view, &result_incl);
    Ok(Application { step, result })
}

/// Outcome of one machine step: the first rule (in list order) with a
/// match, applied at the first match (in anchor order).
pub struct StepOutcome {
    pub rule_index: usize,
    pub rule_name: String,
    pub matched: SubdiagramMatch,
    pub step: Diagram,
    pub result: Diagram,
}

/// Runs a single machine step; `None` when no rule matches.
pub fn step(target: &Diagram, system: &[Rule]) -> Result<Option<StepOutcome>> {
    for rule in system {
        if rule.cell.dim() != target.dim() + 1 {
            return Err(Error::RuleDimension);
        }
    }
    for (rule_index, rule) in system.iter().enumerate() {
        let matches = match_subdiagram(target, rule.lhs())?;
        if let Some(best) = matches.into_iter().next() {
            let application = apply(target, rule, &best.matched)?;
            return Ok(Some(StepOutcome {
                rule_index,
                rule_name: rule.name.clone(),
                matched: best,
                step: application.step,
                result: application.result,
            }));
        }
    }
    Ok(None)
}

/// One entry of a normalization run.
pub struct TraceStep {
    pub rule_index: usize,
    pub rule_name: String,
    pub anchor: Element,
    pub result: Diagram,
}

/// A recorded normalization: the step sequence, and (unless opted out) the
/// whole computation as a single diagram one dimension up, whose input and
/// output boundaries are the initial and final diagrams.
pub struct RewriteTrace {
    pub initial: Diagram,
    pub steps: Vec<TraceStep>,
    pub composite: Option<Diagram>,
    pub reached_normal_form: bool,
}

impl RewriteTrace {
    pub fn final_diagram(&self) -> &Diagram {
        self.steps.last().map_or(&self.initial, |s| &s.result)
    }
}

/// Applies [`step`] until no rule matches or the budget runs out.  With
/// `build_composite`, step diagrams are pasted along the data dimension
/// into the trace composite (`None` for zero-step runs).
pub fn normalize(
    target: &Diagram,
    system: &[Rule],
    max_steps: usize,
    build_composite: bool,
) -> Result<RewriteTrace> {
    let n = target.dim().max(0) as usize;
    let mut steps: Vec<TraceStep> = Vec::new();
    let mut composite: Option<Diagram> = None;
    let mut current = target.clone();
    let mut normal = false;
    for _ in 0..max_steps {
        match step(&current, system)? {
            None => {
                normal = true;
                break;
            }
            Some(outcome) => {
                if build_composite {
                    composite = Some(match composite {
                        None => outcome.step.clone(),
                        Some(acc) => acc.paste(&outcome.step, n)?,
                    });
                }
                current = outcome.result.clone();
                steps.push(TraceStep {
                    rule_index: outcome.rule_index,
                    rule_name: outcome.rule_name,
                    anchor: outcome.matched.matched.anchor,
                    result: outcome.result,
                });
            }
        }
    }
    if !normal && step(&current, system)?.is_none() {
        normal = true;
    }
    Ok(RewriteTrace {
        initial: target.clone(),
        steps,
        composite,
        reached_normal_form: normal,
    })
}

/// Words as 1-dimensional diagrams: a string is a path of arrows labelled
/// by its letters, and a string rewrite rule is a 2-cell between two paths.
pub mod strings {
    use super::*;
    use crate::fixtures;

    pub const POINT_LABEL: &str = "·";

    /// The word as a labelled path; must be non-empty.
    pub fn word_diagram(word: &str) -> Result<Diagram> {
        let letters: Vec<char> = word.chars().collect();
        if letters.is_empty() {
            return Err(Error::Input("empty word".into()));
        }
        let arrow = fixtures::arrow();
        let mut shape = arrow.clone();
        for _ in 1..letters.len() {
            shape = shape.paste(&arrow, 0)?;
        }
        // canonical order of a path alternates source point, arrow, next point
        let point = Label::new(POINT_LABEL);
        let labels = vec![
            vec![point; letters.len() + 1],
            letters.iter().map(|c| Label::new(&c.to_string())).collect(),
        ];
        Diagram::new(shape, labels)
    }

    /// Reads a path diagram back as a word, following the arrows from the
    /// input endpoint.
    pub fn word_of_diagram(diagram: &Diagram) -> Result<String> {
        let shape = diagram.shape();
        if shape.dim() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: shape.dim(),
            });
        }
        let poset = shape.poset();
        let start = shape
            .boundary_subset(Some(0), Orientation::Input)
            .elements()
            .next()
            .ok_or(Error::NotAMolecule)?;
        let mut word = String::new();
        let mut at = start;
        loop {
            let out = poset.cofaces(at, Orientation::Input);
            match out {
                [] => break,
                [next] => {
                    let arrow = Element::new(1, *next);
                    word.push_str(diagram.label(arrow).as_str());
                    at = Element::new(0, poset.faces(arrow, Orientation::Output)[0]);
                }
                _ => return Err(Error::NotAMolecule),
            }
        }
        Ok(word)
    }

    /// The rule `lhs ⇒ rhs` as a 2-cell labelled `name` on top.
    pub fn word_rule(name: &str, lhs: &str, rhs: &str) -> Result<Rule> {
        let lhs_diag = word_diagram(lhs)?;
        let rhs_diag = word_diagram(rhs)?;
        let (shape, src_leg, tgt_leg) =
            Molecule::atom_with_witnesses(lhs_diag.shape(), rhs_diag.shape())?;
        let mut labels: Vec<Vec<Option<Label>>> = shape
            .poset()
            .face_data()
            .iter()
            .map(|g| vec![None; g.len()])
            .collect();
        for e in lhs_diag.shape().poset().elements() {
            let img = src_leg.apply(e);
            labels[img.dim()][img.index()] = Some(lhs_diag.label(e).clone());
        }
        for e in rhs_diag.shape().poset().elements() {
            let img = tgt_leg.apply(e);
            labels[img.dim()][img.index()] = Some(rhs_diag.label(e).clone());
        }
        labels[2][0] = Some(Label::new(name));
        let labels: Vec<Vec<Label>> = labels
            .into_iter()
            .map(|g| g.into_iter().map(|l| l.expect("covered")).collect())
            .collect();
        Rule::new(name, Diagram::new(shape, labels)?)
    }

    /// Independent word-rewriting oracle with the same policy as [`step`]:
    /// first rule in system order, then leftmost occurrence.
    pub fn oracle_step(word: &str, rules: &[(String, String)]) -> Option<(usize, usize, String)> {
        for (i, (lhs, rhs)) in rules.iter().enumerate() {
            if let Some(pos) = word.find(lhs.as_str()) {
                let mut next = String::new();
                next.push_str(&word[..pos]);
                next.push_str(rhs);
                next.push_str(&word[pos + lhs.len()..]);
                return Some((i, pos, next));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn f() -> Label {
        Label::new("f")
    }

    #[test]
    fn label_interning() {
        let a = Label::new("shared");
        let b = Label::new("shared");
        assert_eq!(a, b);
        assert!(Arc::ptr_eq(&a.0, &b.0));
        assert_ne!(Label::new("x"), Label::new("y"));
    }

    #[test]
    fn diagram_requires_total_labels() {
        let arrow = fixtures::arrow();
        let bad = Diagram::new(arrow.clone(), vec![vec![f(), f()]]);
        assert!(matches!(bad, Err(Error::MissingLabel(_))));
        assert!(Diagram::new(arrow, vec![vec![f(), f()], vec![f()]]).is_ok());
    }

    #[test]
    fn worked_substitution_example() {
        // t = f·g, rule: g ⇒ h·k, applied at the second arrow
        let t = {
            let shape = fixtures::arrow().paste(&fixtures::arrow(), 0).unwrap();
            let p = Label::new(strings::POINT_LABEL);
            Diagram::new(
                shape,
                vec![
                    vec![p.clone(), p.clone(), p],
                    vec![Label::new("f"), Label::new("g")],
                ],
            )
            .unwrap()
        };
        let rule = strings::word_rule("split", "g", "hk").unwrap();
        let matches = match_subdiagram(&t, rule.lhs()).unwrap();
        assert_eq!(matches.len(), 1);
        let app = apply(&t, &rule, &matches[0].matched).unwrap();
        let expected = strings::word_diagram("fhk").unwrap();
        assert_eq!(app.result, expected);
        // the reverse rule at the new image restores the original
        let reverse = rule.reversed("join").unwrap();
        let back = step(&app.result, std::slice::from_ref(&reverse))
            .unwrap()
            .unwrap();
        assert_eq!(back.result, t);
    }

    #[test]
    fn rule_with_same_sides_is_identity_on_labels() {
        let t = strings::word_diagram("ab").unwrap();
        let rule = strings::word_rule("same", "a", "a").unwrap();
        let out = step(&t, &[rule]).unwrap().unwrap();
        assert_eq!(out.result, t);
    }

    #[test]
    fn empty_system_is_normal() {
        let t = strings::word_diagram("abc").unwrap();
        let trace = normalize(&t, &[], 10, true).unwrap();
        assert!(trace.reached_normal_form);
        assert!(trace.steps.is_empty());
        assert!(trace.composite.is_none());
        assert_eq!(*trace.final_diagram(), t);
    }

    #[test]
    fn ordered_scan_picks_second_rule() {
        let t = strings::word_diagram("bb").unwrap();
        let r1 = strings::word_rule("r1", "a", "c").unwrap();
        let r2 = strings::word_rule("r2", "b", "c").unwrap();
        let out = step(&t, &[r1, r2]).unwrap().unwrap();
        assert_eq!(out.rule_index, 1);
        assert_eq!(strings::word_of_diagram(&out.result).unwrap(), "cb");
    }

    #[test]
    fn budget_zero_flags_not_normal() {
        let t = strings::word_diagram("ab").unwrap();
        let rule = strings::word_rule("r", "ab", "c").unwrap();
        let trace = normalize(&t, &[rule], 0, false).unwrap();
        assert!(trace.steps.is_empty());
        assert!(!trace.reached_normal_form);
    }

    #[test]
    fn word_roundtrip() {
        for w in ["a", "abcabc", "zya"] {
            let d = strings::word_diagram(w).unwrap();
            assert_eq!(strings::word_of_diagram(&d).unwrap(), w);
        }
    }

    #[test]
    fn normalization_matches_oracle() {
        let rules = vec![("ba".to_string(), "ab".to_string())];
        let word_rules = vec![strings::word_rule("swap", "ba", "ab").unwrap()];
        let mut word = "baba".to_string();
        let t = strings::word_diagram(&word).unwrap();
        let trace = normalize(&t, &word_rules, 50, true).unwrap();
        let mut count = 0;
        while let Some((_, _, next)) = strings::oracle_step(&word, &rules) {
            word = next;
            count += 1;
        }
        assert_eq!(word, "aabb");
        assert_eq!(trace.steps.len(), count);
        assert_eq!(
            strings::word_of_diagram(trace.final_diagram()).unwrap(),
            word
        );
        // trace boundaries
        let composite = trace.composite.as_ref().unwrap();
        assert_eq!(
            composite.boundary(None, Orientation::Input).unwrap(),
            trace.initial
        );
        assert_eq!(
            &composite.boundary(None, Orientation::Output).unwrap(),
            trace.final_diagram()
        );
    }

    #[test]
    fn locality_of_application() {
        // labels outside the matched image never change
        let t = strings::word_diagram("xay").unwrap();
        let rule = strings::word_rule("r", "a", "b").unwrap();
        let out = step(&t, &[rule]).unwrap().unwrap();
        assert_eq!(strings::word_of_diagram(&out.result).unwrap(), "xby");
    }
}
