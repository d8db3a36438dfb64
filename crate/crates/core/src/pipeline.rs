//! The two tilting routes, from a graded presentation and an idempotent to
//! a presented finite-dimensional algebra, with every hypothesis reported.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::findim::{
    build_algebra, default_length_bound, truncate_with_arrows, AlgebraTable, FindimError, TruncatedArrow,
};
use crate::homological::{
    detect_levels, koszul_check_levelled, quadratic_dual, ExtTable, HomologicalError, KoszulVerdict, LevelledStructure,
};
use crate::linalg::Q;
use crate::mutation::{
    coxeter_check, gram_as_usize, left_dual, projective_collection, reversed_level_order, shifted_simples_collection,
    CoxeterVerdict, EulerCollection, MutationError,
};
use crate::presentation::{serialize, GradedPresentation, Path, PresentationError, Quiver, Relation};
use crate::skewgroup::{
    check_grading, fold_presentation, gorenstein_parameter, induced_idempotent, isolated_check, sl_check,
    CyclicGroup, Grading, SkewGroupError,
};

pub const ZERO_ALGEBRA: &str = "zero algebra; singularity category trivial";

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    SkewGroup(#[from] SkewGroupError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Findim(#[from] FindimError),
    #[error(transparent)]
    Homological(#[from] HomologicalError),
    #[error(transparent)]
    Mutation(#[from] MutationError),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("the idempotent e needs at least one vertex")]
    EmptyIdempotent,
    #[error("presentation without group data needs an explicit ell")]
    MissingEll,
    #[error("degree-0 part is infinite-dimensional (no finite basis within length {0})")]
    InfiniteDegreeZero(usize),
    #[error("unknown assumption `{0}` (expected regular, gorenstein or finite-quotient)")]
    UnknownAssumption(String),
    #[error("unknown route `{0}` (expected auto, A or B)")]
    UnknownRoute(String),
}

/// Hypotheses that cannot be decided combinatorially for general input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// A is AS-regular.
    Regular,
    /// eAe is AS-Gorenstein.
    Gorenstein,
    /// A/AeA is finite-dimensional.
    FiniteQuotient,
}

impl FromStr for Assumption {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "regular" => Ok(Self::Regular),
            "gorenstein" => Ok(Self::Gorenstein),
            "finite-quotient" => Ok(Self::FiniteQuotient),
            other => Err(PipelineError::UnknownAssumption(other.to_string())),
        }
    }
}

impl fmt::Display for Assumption {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Regular => "regular",
            Self::Gorenstein => "gorenstein",
            Self::FiniteQuotient => "finite-quotient",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteChoice {
    #[default]
    Auto,
    A,
    B,
}

impl FromStr for RouteChoice {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(Self::Auto),
            "A" | "a" => Ok(Self::A),
            "B" | "b" => Ok(Self::B),
            other => Err(PipelineError::UnknownRoute(other.to_string())),
        }
    }
}

impl fmt::Display for RouteChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Auto => "auto",
            Self::A => "A",
            Self::B => "B",
        })
    }
}

#[derive(Debug, Clone)]
pub struct PipelineInput {
    pub presentation: GradedPresentation,
    pub group: Option<CyclicGroup>,
    pub grading: Option<Grading>,
    /// Required when `group` is absent.
    pub ell: Option<u32>,
    pub e: Vec<usize>,
    pub assumptions: BTreeSet<Assumption>,
    pub length_bound: Option<usize>,
}

impl PipelineInput {
    /// Graded McKay input with e = vertex 0.
    pub fn mckay(group: CyclicGroup, grading: Option<Grading>, presentation: GradedPresentation) -> Self {
        Self {
            presentation,
            group: Some(group),
            grading,
            ell: None,
            e: vec![0],
            assumptions: BTreeSet::new(),
            length_bound: None,
        }
    }

    pub fn with_e(mut self, e: Vec<usize>) -> Self {
        self.e = e;
        self
    }

    /// Resolves vertex names to indices.
    pub fn vertices_by_name(pres: &GradedPresentation, names: &[String]) -> Result<Vec<usize>, PipelineError> {
        names
            .iter()
            .map(|n| pres.quiver().vertex(n).ok_or_else(|| PipelineError::UnknownVertex(n.clone())))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Support {
    Established,
    Assumed,
    NotEstablished,
}

impl Support {
    fn holds(&self) -> bool {
        !matches!(self, Self::NotEstablished)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub r: usize,
    pub weights: Vec<usize>,
    pub display: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InputSummary {
    pub source: &'static str,
    pub group: Option<GroupSummary>,
    pub grading: Option<Grading>,
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
    pub e: Vec<String>,
    pub route_requested: RouteChoice,
    pub length_bound: usize,
    pub assumptions: Vec<Assumption>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NablaSummary {
    pub vertices: usize,
    pub arrows: usize,
    pub relations: usize,
    pub dimension: Option<usize>,
    pub levelled: bool,
    pub top_level: Option<u32>,
    pub level_obstruction: Option<String>,
    pub koszul: Option<KoszulVerdict>,
    pub tilde_e: Vec<String>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Eligibility {
    pub eligible: bool,
    pub inconclusive: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Hypotheses {
    pub sl_check: Option<bool>,
    pub isolated_check: Option<bool>,
    pub regular: Support,
    pub finite_quotient: Support,
    pub gorenstein_corner: Support,
    pub ell: u32,
    pub a0_dimension: usize,
    pub e_a0_e_is_k: bool,
    pub e_a0_eprime_zero: bool,
    pub eprime_a0_e_zero: bool,
    pub nabla: NablaSummary,
    pub route_a: Eligibility,
    pub route_b: Eligibility,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    HypothesisFailure,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Ok => 0,
            Self::HypothesisFailure => 2,
            Self::Inconclusive => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RouteOutcome {
    pub requested: RouteChoice,
    pub taken: Option<Route>,
    pub status: Status,
    pub message: String,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ArrowOut {
    pub id: String,
    pub label: String,
    pub source: String,
    pub target: String,
    pub degree: u32,
    pub representative: Vec<String>,
    pub composite: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PresentationOut {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowOut>,
    pub relations: Vec<String>,
    pub dimension: Option<usize>,
    pub text: String,
    #[serde(skip)]
    pub graded: GradedPresentation,
}

impl PresentationOut {
    /// Arrows named in `origin` get their representative paths recorded.
    pub fn describe(pres: &GradedPresentation, dimension: Option<usize>, origin: &[TruncatedArrow]) -> Self {
        let q = pres.quiver();
        let names = q.vertices();
        let arrows = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let rep = origin
                    .iter()
                    .find(|t| t.id == a.id)
                    .map(|t| t.representative.clone())
                    .unwrap_or_default();
                ArrowOut {
                    id: a.id.clone(),
                    label: a.label.clone(),
                    source: names[a.source].clone(),
                    target: names[a.target].clone(),
                    degree: pres.degree_of(i),
                    composite: rep.len() > 1,
                    representative: rep,
                }
            })
            .collect();
        Self {
            vertices: names.to_vec(),
            arrows,
            relations: pres.relations().iter().map(|r| r.display(q)).collect(),
            dimension,
            text: serialize(pres),
            graded: pres.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes") + "\n"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedLoop {
    pub rebuilt_dimension: usize,
    pub corner_dimension: usize,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualCheck {
    /// Vertices indexing all three matrices: levels descending, vertex order
    /// within a level. Position x of the left dual collection is the shifted
    /// simple S_v[-s(v)] of the vertex v at position x.
    pub order: Vec<String>,
    pub cartan_dual: Vec<Vec<usize>>,
    pub left_dual_gram: Option<Vec<Vec<usize>>>,
    pub shifted_simples_gram: Vec<Vec<usize>>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationShapes {
    pub total: usize,
    pub anticommutators: usize,
    pub squares: usize,
    pub vanish_in_exterior_algebra: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CrossChecks {
    pub closed_loop: Option<ClosedLoop>,
    pub koszul_dual: Option<DualCheck>,
    pub coxeter: Option<CoxeterVerdict>,
    pub relation_shapes: Option<RelationShapes>,
    pub projectives: Option<EulerCollection>,
    pub left_dual: Option<EulerCollection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TiltReport {
    pub input: InputSummary,
    pub hypotheses: Hypotheses,
    pub route: RouteOutcome,
    pub presentation: Option<PresentationOut>,
    pub cross_checks: CrossChecks,
}

impl TiltReport {
    pub fn exit_code(&self) -> i32 {
        self.route.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}

/// Everything computed before a route is chosen.
struct Prepared {
    nabla: GradedPresentation,
    tab: Option<AlgebraTable>,
    lv: Option<LevelledStructure>,
    ext: Option<ExtTable>,
    kept: Vec<usize>,
    bound: usize,
    hypotheses: Hypotheses,
    input: InputSummary,
}

/// The degree-0 part: degree-0 arrows and the relations among them,
/// regraded so every arrow has degree 1.
pub fn degree_zero_part(pres: &GradedPresentation) -> Result<GradedPresentation, PipelineError> {
    let q = pres.quiver();
    let arrows: Vec<_> = q
        .arrows()
        .iter()
        .enumerate()
        .filter(|(i, _)| pres.degree_of(*i) == 0)
        .map(|(_, a)| a.clone())
        .collect();
    let sub = Quiver::new(q.vertices().to_vec(), arrows)?;
    let mut relations = Vec::new();
    for r in pres.relations() {
        if r.terms().iter().any(|(_, p)| p.arrows.iter().any(|&a| pres.degree_of(a) != 0)) {
            continue;
        }
        let terms = r
            .terms()
            .iter()
            .map(|(c, p)| {
                let ids: Vec<&str> = p.arrows.iter().map(|&a| q.arrows()[a].id.as_str()).collect();
                let path = if ids.is_empty() { Path::trivial(p.source) } else { Path::from_ids(&sub, &ids)? };
                Ok((c.clone(), path))
            })
            .collect::<Result<Vec<(Q, Path)>, PresentationError>>()?;
        relations.push(Relation::new(terms)?);
    }
    let degrees = vec![1; sub.num_arrows()];
    Ok(GradedPresentation::new(sub, degrees, relations)?)
}

fn block_dimension(tab: &AlgebraTable, from: &[usize], to: &[usize]) -> usize {
    from.iter().map(|&a| to.iter().map(|&b| tab.basis_between(a, b).len()).sum::<usize>()).sum()
}

fn prepare(input: &PipelineInput, requested: RouteChoice) -> Result<Prepared, PipelineError> {
    let pres = &input.presentation;
    let q = pres.quiver();
    let n = q.num_vertices();
    let mut e: Vec<usize> = input.e.clone();
    e.sort_unstable();
    e.dedup();
    if e.is_empty() {
        return Err(PipelineError::EmptyIdempotent);
    }
    if let Some(&v) = e.iter().find(|&&v| v >= n) {
        return Err(PipelineError::UnknownVertex(v.to_string()));
    }
    let e_prime: Vec<usize> = (0..n).filter(|v| !e.contains(v)).collect();

    let ell = match (&input.group, input.ell) {
        (_, Some(ell)) => ell,
        (Some(g), None) => {
            check_grading(g, pres)?;
            gorenstein_parameter(g, pres)?
        }
        (None, None) => return Err(PipelineError::MissingEll),
    };
    let nabla = fold_presentation(pres, ell)?;
    let tilde_e = induced_idempotent(&e, n, ell)?;
    let tilde_idx: BTreeSet<usize> = tilde_e.iter().map(|f| f.level as usize * n + f.vertex).collect();
    let kept: Vec<usize> = (0..nabla.quiver().num_vertices()).filter(|v| !tilde_idx.contains(v)).collect();
    let bound = input.length_bound.unwrap_or_else(|| default_length_bound(&nabla));

    let mut notes = Vec::new();
    if input.group.is_some() && input.ell.is_none() {
        notes.push(format!("ell = {ell} read off as the degree of the cycle x1..xd (inferred rule)"));
    }

    // degree-0 part; its quiver has no cycles when the grading is valid, so
    // paths are shorter than the number of vertices
    let a0 = degree_zero_part(pres)?;
    let a0_bound = input.length_bound.unwrap_or(0).max(n + 1);
    let a0_tab = build_algebra(&a0, a0_bound).map_err(|err| match err {
        FindimError::BoundExceeded { bound, .. } => PipelineError::InfiniteDegreeZero(bound),
        other => other.into(),
    })?;
    let e_a0_e_is_k = block_dimension(&a0_tab, &e, &e) == 1;
    let e_a0_eprime_zero = block_dimension(&a0_tab, &e_prime, &e) == 0;
    let eprime_a0_e_zero = block_dimension(&a0_tab, &e, &e_prime) == 0;

    let all = e_prime.is_empty();
    let (sl, iso) = match &input.group {
        Some(g) => (Some(sl_check(g)), Some(isolated_check(g))),
        None => (None, None),
    };
    let support = |established: bool, flag: Assumption| {
        if established {
            Support::Established
        } else if input.assumptions.contains(&flag) {
            Support::Assumed
        } else {
            Support::NotEstablished
        }
    };
    let regular = support(input.group.is_some(), Assumption::Regular);
    let finite_quotient = support(all || (iso == Some(true) && e.contains(&0)), Assumption::FiniteQuotient);
    let gorenstein_corner = support(all || (sl == Some(true) && e == [0]), Assumption::Gorenstein);
    let mut setting_failures = Vec::new();
    if !regular.holds() {
        setting_failures.push("AS-regularity of A not established".to_string());
    }
    if !finite_quotient.holds() {
        setting_failures.push("A/AeA finiteness not established".to_string());
    }
    if !gorenstein_corner.holds() {
        setting_failures.push("AS-Gorenstein property of eAe not established".to_string());
    }
    notes.extend(setting_failures.iter().cloned());
    for (flag, s) in [
        (Assumption::Regular, &regular),
        (Assumption::FiniteQuotient, &finite_quotient),
        (Assumption::Gorenstein, &gorenstein_corner),
    ] {
        if *s == Support::Assumed {
            notes.push(format!("assumed: {flag}"));
        }
    }

    // the Beilinson algebra
    let (tab, nabla_inconclusive) = match build_algebra(&nabla, bound) {
        Ok(t) => (Some(t), false),
        Err(FindimError::BoundExceeded { bound, .. }) => {
            notes.push(format!("nabla A has no finite basis within length {bound}"));
            (None, true)
        }
        Err(other) => return Err(other.into()),
    };
    let levels = detect_levels(&nabla);
    let (lv, level_obstruction) = match levels {
        Ok(lv) => (Some(lv), None),
        Err(w) => (
            None,
            Some(format!(
                "arrow {} from {} (level {}) to {} (level {})",
                w.arrow, w.source, w.source_level, w.target, w.target_level
            )),
        ),
    };
    let (koszul, ext) = match (&tab, &lv) {
        (Some(t), Some(l)) => {
            let (v, ext) = koszul_check_levelled(t, l, input.length_bound);
            (Some(v), Some(ext))
        }
        _ => (None, None),
    };

    let mut route_a = Eligibility::default();
    route_a.failures.extend(setting_failures.iter().cloned());
    match ell {
        1 => {
            if !e_a0_eprime_zero && !eprime_a0_e_zero {
                route_a.failures.push("ell = 1 but eA0e' and e'A0e are both nonzero".into());
            }
        }
        2 => {
            if !e_a0_eprime_zero {
                route_a.failures.push("eA0e' is nonzero".into());
            }
            if !eprime_a0_e_zero {
                route_a.failures.push("e'A0e is nonzero".into());
            }
        }
        l => route_a
            .failures
            .push(format!("ell = {l} >= 3: the construction only yields a silting object")),
    }
    route_a.inconclusive = route_a.failures.is_empty() && nabla_inconclusive;
    route_a.eligible = route_a.failures.is_empty() && !nabla_inconclusive;

    let mut route_b = Eligibility::default();
    route_b.failures.extend(setting_failures.iter().cloned());
    if !e_a0_e_is_k {
        route_b.failures.push("eA0e is not k".into());
    }
    if lv.is_none() {
        route_b.failures.push("nabla A is not levelled".into());
    }
    match &koszul {
        Some(KoszulVerdict::NotKoszul { k, from, to, .. }) => {
            let names = nabla.quiver().vertices();
            route_b.failures.push(format!(
                "nabla A is not Koszul: Ext^{k}(S_{}, S_{}) is nonzero",
                names[*from], names[*to]
            ));
        }
        Some(KoszulVerdict::Inconclusive { bound }) => {
            notes.push(format!("Koszulity inconclusive with Ext bound {bound}"));
        }
        _ => {}
    }
    let koszul_ok = koszul.as_ref().is_some_and(KoszulVerdict::is_koszul);
    route_b.inconclusive = route_b.failures.is_empty() && !koszul_ok;
    route_b.eligible = route_b.failures.is_empty() && koszul_ok;

    let names = q.vertices();
    let input_summary = InputSummary {
        source: if input.group.is_some() { "mckay" } else { "file" },
        group: input.group.as_ref().map(|g| GroupSummary {
            r: g.order(),
            weights: g.weights().to_vec(),
            display: g.to_string(),
        }),
        grading: input.grading.clone(),
        vertices: n,
        arrows: q.num_arrows(),
        relations: pres.relations().len(),
        e: e.iter().map(|&v| names[v].clone()).collect(),
        route_requested: requested,
        length_bound: bound,
        assumptions: input.assumptions.iter().copied().collect(),
    };
    let nabla_names = nabla.quiver().vertices();
    let hypotheses = Hypotheses {
        sl_check: sl,
        isolated_check: iso,
        regular,
        finite_quotient,
        gorenstein_corner,
        ell,
        a0_dimension: a0_tab.dimension(),
        e_a0_e_is_k,
        e_a0_eprime_zero,
        eprime_a0_e_zero,
        nabla: NablaSummary {
            vertices: nabla.quiver().num_vertices(),
            arrows: nabla.quiver().num_arrows(),
            relations: nabla.relations().len(),
            dimension: tab.as_ref().map(AlgebraTable::dimension),
            levelled: lv.is_some(),
            top_level: lv.as_ref().map(|l| l.top),
            level_obstruction,
            koszul,
            tilde_e: tilde_idx.iter().map(|&v| nabla_names[v].clone()).collect(),
        },
        route_a,
        route_b,
        notes,
    };
    Ok(Prepared {
        nabla,
        tab,
        lv,
        ext,
        kept,
        bound,
        hypotheses,
        input: input_summary,
    })
}

/// Hypothesis verdicts only. The status is ok when some route is eligible.
pub fn check(input: &PipelineInput) -> Result<TiltReport, PipelineError> {
    let p = prepare(input, RouteChoice::Auto)?;
    let h = &p.hypotheses;
    let (status, message, failures) = if h.route_b.eligible || h.route_a.eligible {
        let routes: Vec<&str> = [(h.route_a.eligible, "A"), (h.route_b.eligible, "B")]
            .iter()
            .filter(|(ok, _)| *ok)
            .map(|(_, r)| *r)
            .collect();
        (Status::Ok, format!("eligible routes: {}", routes.join(", ")), Vec::new())
    } else if h.route_a.inconclusive || h.route_b.inconclusive {
        (Status::Inconclusive, "no route established within the bounds".to_string(), Vec::new())
    } else {
        (Status::HypothesisFailure, "no route eligible".to_string(), all_failures(h))
    };
    Ok(TiltReport {
        input: p.input,
        route: RouteOutcome {
            requested: RouteChoice::Auto,
            taken: None,
            status,
            message,
            failures,
        },
        hypotheses: p.hypotheses,
        presentation: None,
        cross_checks: CrossChecks::default(),
    })
}

fn all_failures(h: &Hypotheses) -> Vec<String> {
    let mut out: Vec<String> = h.route_a.failures.iter().map(|f| format!("route A: {f}")).collect();
    out.extend(h.route_b.failures.iter().map(|f| format!("route B: {f}")));
    out
}

/// Runs the requested route, or under `Auto` route B when eligible and
/// route A otherwise.
pub fn tilt(input: &PipelineInput, requested: RouteChoice) -> Result<TiltReport, PipelineError> {
    let p = prepare(input, requested)?;
    let h = &p.hypotheses;
    let chosen = match requested {
        RouteChoice::A => Route::A,
        RouteChoice::B => Route::B,
        RouteChoice::Auto if h.route_b.eligible => Route::B,
        RouteChoice::Auto if h.route_a.eligible => Route::A,
        RouteChoice::Auto if h.route_b.inconclusive => Route::B,
        RouteChoice::Auto if h.route_a.inconclusive => Route::A,
        RouteChoice::Auto => {
            let failures = all_failures(h);
            return Ok(refused(p, requested, None, Status::HypothesisFailure, "no route eligible", failures));
        }
    };
    let elig = match chosen {
        Route::A => &h.route_a,
        Route::B => &h.route_b,
    };
    if !elig.eligible {
        let (status, message) = if elig.inconclusive {
            (Status::Inconclusive, format!("route {chosen:?} inconclusive within the bounds"))
        } else {
            (Status::HypothesisFailure, format!("route {chosen:?} hypotheses fail"))
        };
        let failures = elig.failures.clone();
        return Ok(refused(p, requested, Some(chosen), status, &message, failures));
    }
    match chosen {
        Route::A => run_route_a(p, requested),
        Route::B => run_route_b(p, requested),
    }
}

fn refused(
    p: Prepared,
    requested: RouteChoice,
    taken: Option<Route>,
    status: Status,
    message: &str,
    failures: Vec<String>,
) -> TiltReport {
    TiltReport {
        input: p.input,
        hypotheses: p.hypotheses,
        route: RouteOutcome {
            requested,
            taken,
            status,
            message: message.to_string(),
            failures,
        },
        presentation: None,
        cross_checks: CrossChecks::default(),
    }
}

/// Truncates `tab` at `kept` and re-builds the result. `None` for the zero
/// algebra; `Err(report status)` when a bound is hit.
fn truncated(tab: &AlgebraTable, kept: &[usize], bound: usize) -> Result<Option<(PresentationOut, ClosedLoop)>, PipelineError> {
    if kept.is_empty() {
        return Ok(None);
    }
    let (pres, info) = truncate_with_arrows(tab, kept)?;
    let corner = tab.corner_dimension(kept);
    let rebuilt = build_algebra(&pres, bound.max(tab.max_weight() as usize + 1))?.dimension();
    let out = PresentationOut::describe(&pres, Some(rebuilt), &info);
    Ok(Some((
        out,
        ClosedLoop {
            rebuilt_dimension: rebuilt,
            corner_dimension: corner,
            agree: rebuilt == corner,
        },
    )))
}

fn finish(
    p: Prepared,
    requested: RouteChoice,
    route: Route,
    out: Option<(PresentationOut, ClosedLoop)>,
    mut checks: CrossChecks,
) -> TiltReport {
    let (presentation, message) = match out {
        Some((pres, closed)) => {
            checks.closed_loop = Some(closed);
            let msg = format!(
                "{} vertices, {} arrows, {} relations",
                pres.vertices.len(),
                pres.arrows.len(),
                pres.relations.len()
            );
            (Some(pres), msg)
        }
        None => (None, ZERO_ALGEBRA.to_string()),
    };
    TiltReport {
        input: p.input,
        hypotheses: p.hypotheses,
        route: RouteOutcome {
            requested,
            taken: Some(route),
            status: Status::Ok,
            message,
            failures: Vec::new(),
        },
        presentation,
        cross_checks: checks,
    }
}

fn bounded<T>(
    r: Result<T, PipelineError>,
) -> Result<Result<T, String>, PipelineError> {
    match r {
        Ok(t) => Ok(Ok(t)),
        Err(PipelineError::Findim(FindimError::BoundExceeded { bound, .. })) => {
            Ok(Err(format!("no finite basis within length {bound}")))
        }
        Err(e) => Err(e),
    }
}

fn run_route_a(p: Prepared, requested: RouteChoice) -> Result<TiltReport, PipelineError> {
    let tab = p.tab.as_ref().expect("eligible route A has a finite nabla A");
    match bounded(truncated(tab, &p.kept, p.bound))? {
        Ok(out) => Ok(finish(p, requested, Route::A, out, CrossChecks::default())),
        Err(msg) => Ok(refused(p, requested, Some(Route::A), Status::Inconclusive, &msg, Vec::new())),
    }
}

fn run_route_b(p: Prepared, requested: RouteChoice) -> Result<TiltReport, PipelineError> {
    let tab = p.tab.as_ref().expect("eligible route B has a finite nabla A");
    let lv = p.lv.as_ref().expect("eligible route B is levelled");
    let ext = p.ext.as_ref().expect("eligible route B has an Ext table");
    let dual = quadratic_dual(&p.nabla)?;
    let dual_tab = match bounded(build_algebra(&dual, p.bound).map_err(PipelineError::from))? {
        Ok(t) => t,
        Err(msg) => {
            let msg = format!("dual of nabla A: {msg}");
            return Ok(refused(p, requested, Some(Route::B), Status::Inconclusive, &msg, Vec::new()));
        }
    };

    let mut checks = CrossChecks::default();
    let names = p.nabla.quiver().vertices();
    let order = reversed_level_order(lv);
    let cartan = dual_tab.cartan_matrix();
    let cartan_dual: Vec<Vec<usize>> = order.iter().map(|&a| order.iter().map(|&b| cartan[a][b]).collect()).collect();
    let projectives = projective_collection(tab, lv)?;
    let dual_collection = left_dual(&projectives)?;
    let left_gram = gram_as_usize(&dual_collection.chi());
    let (_, simples) = shifted_simples_collection(tab, lv, ext)?;
    checks.koszul_dual = Some(DualCheck {
        order: order.iter().map(|&v| names[v].clone()).collect(),
        agree: left_gram.as_ref() == Some(&cartan_dual) && simples == cartan_dual,
        cartan_dual,
        left_dual_gram: left_gram,
        shifted_simples_gram: simples,
    });
    checks.coxeter = Some(coxeter_check(&projectives)?);
    checks.projectives = Some(projectives);
    checks.left_dual = Some(dual_collection);

    match bounded(truncated(&dual_tab, &p.kept, p.bound))? {
        Ok(out) => {
            checks.relation_shapes = out.as_ref().and_then(|(o, _)| relation_shapes(&o.graded));
            Ok(finish(p, requested, Route::B, out, checks))
        }
        Err(msg) => Ok(refused(p, requested, Some(Route::B), Status::Inconclusive, &msg, Vec::new())),
    }
}

/// Splits a label such as `x3x4` into its letters `x3`, `x4`.
fn letters(label: &str) -> Option<Vec<String>> {
    let mut out = Vec::new();
    let mut rest = label;
    while !rest.is_empty() {
        let tail = rest.strip_prefix('x')?;
        let digits = tail.find(|c: char| !c.is_ascii_digit()).unwrap_or(tail.len());
        if digits == 0 {
            return None;
        }
        out.push(format!("x{}", &tail[..digits]));
        rest = &tail[digits..];
    }
    Some(out)
}

/// Classifies relations over letters x1, x2, ...: literal anticommutators
/// x_i x_j + x_j x_i, squares x_i x_i, and whether every relation vanishes
/// in the exterior algebra on the letters. `None` when labels are not words
/// in such letters.
pub fn relation_shapes(pres: &GradedPresentation) -> Option<RelationShapes> {
    let q = pres.quiver();
    let words: Vec<Vec<String>> = q.arrows().iter().map(|a| letters(&a.label)).collect::<Option<_>>()?;
    let word_of = |p: &Path| -> Vec<String> { p.arrows.iter().flat_map(|&a| words[a].iter().cloned()).collect() };
    let mut shapes = RelationShapes {
        total: pres.relations().len(),
        anticommutators: 0,
        squares: 0,
        vanish_in_exterior_algebra: true,
    };
    for r in pres.relations() {
        let terms = r.terms();
        let single: Vec<Vec<String>> = terms
            .iter()
            .filter(|(_, p)| p.len() == 2 && p.arrows.iter().all(|&a| words[a].len() == 1))
            .map(|(_, p)| word_of(p))
            .collect();
        if terms.len() == 1 && single.len() == 1 && single[0][0] == single[0][1] {
            shapes.squares += 1;
        } else if terms.len() == 2
            && single.len() == 2
            && terms[0].0 == terms[1].0
            && single[0][0] == single[1][1]
            && single[0][1] == single[1][0]
        {
            shapes.anticommutators += 1;
        }

        let mut exterior: BTreeMap<Vec<String>, Q> = BTreeMap::new();
        for (c, p) in terms {
            let mut w = word_of(p);
            let mut sign = 1i64;
            for i in 0..w.len() {
                for j in 0..w.len() - 1 - i {
                    if w[j] > w[j + 1] {
                        w.swap(j, j + 1);
                        sign = -sign;
                    }
                }
            }
            if w.windows(2).any(|x| x[0] == x[1]) {
                continue;
            }
            *exterior.entry(w).or_insert_with(|| Q::from_integer(0.into())) += c * Q::from_integer(sign.into());
        }
        if exterior.values().any(|c| *c != Q::from_integer(0.into())) {
            shapes.vanish_in_exterior_algebra = false;
        }
    }
    Some(shapes)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Human-readable summary of a report.
pub fn render_text(r: &TiltReport) -> String {
    let mut s = String::new();
    let h = &r.hypotheses;
    if let Some(g) = &r.input.group {
        let _ = writeln!(s, "group: {}", g.display);
    }
    let _ = writeln!(
        s,
        "input: {} vertices, {} arrows, {} relations; e = {{{}}}",
        r.input.vertices,
        r.input.arrows,
        r.input.relations,
        r.input.e.join(", ")
    );
    let opt = |b: Option<bool>| b.map_or("n/a", yes);
    let _ = writeln!(s, "sl_check: {}  isolated_check: {}", opt(h.sl_check), opt(h.isolated_check));
    let _ = writeln!(
        s,
        "regular: {:?}  A/AeA finite: {:?}  eAe Gorenstein: {:?}",
        h.regular, h.finite_quotient, h.gorenstein_corner
    );
    let _ = writeln!(s, "ell: {}  dim A0: {}", h.ell, h.a0_dimension);
    let _ = writeln!(
        s,
        "eA0e = k: {}  eA0e' = 0: {}  e'A0e = 0: {}",
        yes(h.e_a0_e_is_k),
        yes(h.e_a0_eprime_zero),
        yes(h.eprime_a0_e_zero)
    );
    let nb = &h.nabla;
    let _ = writeln!(
        s,
        "nabla A: {} vertices, {} arrows, {} relations, dimension {}",
        nb.vertices,
        nb.arrows,
        nb.relations,
        nb.dimension.map_or("unknown".to_string(), |d| d.to_string())
    );
    match (&nb.top_level, &nb.level_obstruction) {
        (Some(top), _) => {
            let _ = writeln!(s, "levelled: yes (top level {top})");
        }
        (None, Some(w)) => {
            let _ = writeln!(s, "levelled: no ({w})");
        }
        _ => {}
    }
    if let Some(k) = &nb.koszul {
        let text = match k {
            KoszulVerdict::Koszul => "yes".to_string(),
            KoszulVerdict::NotKoszul { k, .. } => format!("no (nonlinear Ext^{k})"),
            KoszulVerdict::Inconclusive { bound } => format!("inconclusive (bound {bound})"),
        };
        let _ = writeln!(s, "koszul: {text}");
    }
    for (name, el) in [("A", &h.route_a), ("B", &h.route_b)] {
        let _ = writeln!(s, "route {name} eligible: {}", yes(el.eligible));
        for f in &el.failures {
            let _ = writeln!(s, "  - {f}");
        }
    }
    for note in &h.notes {
        let _ = writeln!(s, "note: {note}");
    }
    let taken = r.route.taken.map_or("none".to_string(), |t| format!("{t:?}"));
    let _ = writeln!(s, "route: {taken} ({:?}): {}", r.route.status, r.route.message);
    for f in &r.route.failures {
        let _ = writeln!(s, "  failed: {f}");
    }
    if let Some(p) = &r.presentation {
        let composites: Vec<&str> = p.arrows.iter().filter(|a| a.composite).map(|a| a.label.as_str()).collect();
        if !composites.is_empty() {
            let _ = writeln!(s, "composite arrows: {}", composites.join(", "));
        }
        s.push_str(&p.text);
    }
    let c = &r.cross_checks;
    if let Some(l) = &c.closed_loop {
        let _ = writeln!(s, "check dimension: rebuilt {} vs corner {}", l.rebuilt_dimension, l.corner_dimension);
    }
    if let Some(d) = &c.koszul_dual {
        let _ = writeln!(s, "check dual Cartan = left dual Gram = shifted simples Ext: {}", yes(d.agree));
    }
    if let Some(x) = &c.coxeter {
        let _ = writeln!(s, "check Coxeter relation on {} objects: {}", x.objects, yes(x.holds));
    }
    if let Some(sh) = &c.relation_shapes {
        let _ = writeln!(
            s,
            "relations: {} anticommutators, {} squares, {} other; vanish in exterior algebra: {}",
            sh.anticommutators,
            sh.squares,
            sh.total - sh.anticommutators - sh.squares,
            yes(sh.vanish_in_exterior_algebra)
        );
    }
    s
}
