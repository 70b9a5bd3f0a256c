use std::time::{Duration, Instant};

use clap::{Args, ValueEnum};
use num_rational::BigRational;
use rfx_core::explain::{
    comprehensible_reason, delta_probable_reason_dt, direct_reason, inclusion_preferred_reason, lime_linear_reason,
    majoritary_reason, majoritary_reason_multi, sufficient_reason_rf, ImplicantOracle, LinearModel, Prioritization,
    Reason, ReasonKind, DEFAULT_SEED,
};
use rfx_core::optimize::{
    approx_minimal_reason_dt, majoritary_wcnf, minimal_majoritary_reason, minimal_sufficient_reason_dt,
    minimal_weight_majoritary_reason, WeightMap,
};
use rfx_core::{parse_rational, DecisionTree, Error, Instance, RandomForest, Term};
use serde::Serialize;

use crate::instances::bit_string;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, ValueEnum)]
pub enum Kind {
    Direct,
    Sufficient,
    Majoritary,
    MinimalMajoritary,
    MinimalWeight,
    MinimalSufficient,
    ApproxMinimal,
    DeltaProbable,
    Comprehensible,
    InclusionPreferred,
    Lime,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Direct => "direct",
            Kind::Sufficient => "sufficient",
            Kind::Majoritary => "majoritary",
            Kind::MinimalMajoritary => "minimal-majoritary",
            Kind::MinimalWeight => "minimal-weight",
            Kind::MinimalSufficient => "minimal-sufficient",
            Kind::ApproxMinimal => "approx-minimal",
            Kind::DeltaProbable => "delta-probable",
            Kind::Comprehensible => "comprehensible",
            Kind::InclusionPreferred => "inclusion-preferred",
            Kind::Lime => "lime",
        }
    }

    fn single_tree_only(self) -> bool {
        matches!(
            self,
            Kind::MinimalSufficient | Kind::ApproxMinimal | Kind::DeltaProbable
        )
    }

    pub fn is_anytime(self) -> bool {
        matches!(
            self,
            Kind::MinimalMajoritary | Kind::MinimalWeight | Kind::MinimalSufficient
        )
    }

    pub fn parse_list(text: &str) -> Result<Vec<Kind>, CliError> {
        let kinds = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| Kind::from_str(s, true).map_err(|_| CliError::Usage(format!("unknown kind {s:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        if kinds.is_empty() {
            return Err(CliError::Usage("no kinds given".into()));
        }
        Ok(kinds)
    }
}

/// Implicant notion used by comprehensible and inclusion-preferred reasons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Notion {
    /// Implies the forest (SAT-based test).
    Sufficient,
    /// Implies a strict majority of the trees.
    #[value(alias = "majoritary")]
    Majority,
    /// Single-tree model only; needs --delta.
    DeltaProbable,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ExplainFlags {
    /// Probability threshold for delta-probable reasons (e.g. 0.9 or 9/10).
    #[arg(long)]
    pub delta: Option<String>,
    /// Salience strata, least salient first: "x4;x2,x3;x1".
    #[arg(long)]
    pub strata: Option<String>,
    /// Comma-separated intelligible features for comprehensible reasons.
    #[arg(long)]
    pub intelligible: Option<String>,
    /// Feature weights: positive integers for minimal-weight, signed
    /// rationals (the linear surrogate) for lime. Either a plain list or
    /// name:weight pairs; unlisted features weigh 1 (minimal-weight) or 0.
    #[arg(long, allow_hyphen_values = true)]
    pub weights: Option<String>,
    /// Implicant notion for comprehensible and inclusion-preferred reasons.
    #[arg(long, value_enum)]
    pub notion: Option<Notion>,
    /// Number of random elimination orders tried by the majoritary greedy.
    #[arg(long)]
    pub permutations: Option<usize>,
    /// Seed for the random elimination orders.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Time budget in seconds for SAT/MaxSAT based kinds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Elimination order for greedy kinds; unlisted features follow.
    #[arg(long)]
    pub order: Option<String>,
}

/// Parsed and checked explanation options.
#[derive(Debug, Clone)]
pub struct Settings {
    pub delta: Option<BigRational>,
    pub strata: Option<Prioritization>,
    pub intelligible: Option<Vec<usize>>,
    pub weights: Option<WeightMap>,
    pub lime: Option<LinearModel>,
    pub notion: Notion,
    pub permutations: usize,
    pub seed: u64,
    pub timeout: Option<Duration>,
    pub order: Vec<usize>,
}

/// Resolves a feature reference: a model feature name, `x<k>`, or `<k>`.
pub fn resolve_feature(forest: &RandomForest, text: &str) -> Result<usize, CliError> {
    let text = text.trim();
    let n = forest.var_count();
    if let Some(v) = (1..=n).find(|&v| forest.feature_name(v) == text) {
        return Ok(v);
    }
    let digits = text.strip_prefix('x').unwrap_or(text);
    match digits.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v),
        _ => Err(CliError::Usage(format!("unknown feature {text:?}"))),
    }
}

fn feature_list(forest: &RandomForest, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| resolve_feature(forest, s))
        .collect()
}

fn weight_list(forest: &RandomForest, text: &str, default: &str) -> Result<Vec<String>, CliError> {
    let n = forest.var_count();
    let items: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.iter().all(|s| !s.contains(':')) {
        if items.len() != n {
            return Err(CliError::Usage(format!(
                "--weights lists {} values for {n} features",
                items.len()
            )));
        }
        return Ok(items.iter().map(|s| s.to_string()).collect());
    }
    let mut out = vec![default.to_string(); n];
    for item in items {
        let (name, w) = item
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("mixed --weights forms at {item:?}")))?;
        out[resolve_feature(forest, name)? - 1] = w.trim().to_string();
    }
    Ok(out)
}

fn flag_error(flag: &str, kinds: &[Kind]) -> CliError {
    let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
    CliError::Usage(format!("--{flag} does not apply to {}", names.join(", ")))
}

impl ExplainFlags {
    /// Checks every flag against the requested kinds and parses it.
    pub fn resolve(&self, forest: &RandomForest, kinds: &[Kind]) -> Result<Settings, CliError> {
        let any = |f: fn(Kind) -> bool| kinds.iter().any(|&k| f(k));
        fn uses_notion(k: Kind) -> bool {
            matches!(k, Kind::Comprehensible | Kind::InclusionPreferred)
        }
        let notion = self.notion.unwrap_or(Notion::Majority);

        if self.delta.is_some()
            && !any(|k| k == Kind::DeltaProbable)
            && !(any(uses_notion) && notion == Notion::DeltaProbable)
        {
            return Err(flag_error("delta", kinds));
        }
        if self.strata.is_some() && !any(|k| k == Kind::InclusionPreferred) {
            return Err(flag_error("strata", kinds));
        }
        if self.intelligible.is_some() && !any(|k| k == Kind::Comprehensible) {
            return Err(flag_error("intelligible", kinds));
        }
        if self.weights.is_some() && !any(|k| matches!(k, Kind::MinimalWeight | Kind::Lime)) {
            return Err(flag_error("weights", kinds));
        }
        if self.weights.is_some() && any(|k| k == Kind::MinimalWeight) && any(|k| k == Kind::Lime) {
            return Err(CliError::Usage(
                "--weights cannot serve minimal-weight and lime at once".into(),
            ));
        }
        if self.notion.is_some() && !any(uses_notion) {
            return Err(flag_error("notion", kinds));
        }
        if (self.permutations.is_some() || self.seed.is_some()) && !any(|k| k == Kind::Majoritary) {
            return Err(flag_error(
                if self.permutations.is_some() {
                    "permutations"
                } else {
                    "seed"
                },
                kinds,
            ));
        }
        if self.timeout.is_some() && !any(|k| matches!(k, Kind::Sufficient) || k.is_anytime() || uses_notion(k)) {
            return Err(flag_error("timeout", kinds));
        }
        let greedy = |k: Kind| {
            matches!(
                k,
                Kind::Sufficient | Kind::Majoritary | Kind::DeltaProbable | Kind::Comprehensible
            )
        };
        if self.order.is_some() && !any(greedy) {
            return Err(flag_error("order", kinds));
        }

        let n = forest.var_count();
        if (any(Kind::single_tree_only) || (any(uses_notion) && notion == Notion::DeltaProbable))
            && forest.tree_count() != 1
        {
            return Err(CliError::Usage(format!(
                "this kind needs a single-tree model; the model has {} trees",
                forest.tree_count()
            )));
        }
        let needs_delta = any(|k| k == Kind::DeltaProbable) || (any(uses_notion) && notion == Notion::DeltaProbable);
        let delta = match &self.delta {
            Some(s) => {
                let d = parse_rational(s)?;
                if d < BigRational::from_integer(0.into()) || d > BigRational::from_integer(1.into()) {
                    return Err(CliError::Usage(format!("--delta {s} is outside [0, 1]")));
                }
                Some(d)
            }
            None if needs_delta => return Err(CliError::Usage("delta-probable reasons need --delta".into())),
            None => None,
        };
        let strata = match &self.strata {
            Some(s) => {
                let strata = s
                    .split(';')
                    .map(|stratum| feature_list(forest, stratum))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Prioritization::new(strata, n)?)
            }
            None if any(|k| k == Kind::InclusionPreferred) => {
                return Err(CliError::Usage("inclusion-preferred reasons need --strata".into()))
            }
            None => None,
        };
        let intelligible = match &self.intelligible {
            Some(s) => Some(feature_list(forest, s)?),
            None if any(|k| k == Kind::Comprehensible) => {
                return Err(CliError::Usage("comprehensible reasons need --intelligible".into()))
            }
            None => None,
        };
        let (mut weights, mut lime) = (None, None);
        if any(|k| k == Kind::MinimalWeight) {
            let text = self
                .weights
                .as_deref()
                .ok_or_else(|| CliError::Usage("minimal-weight reasons need --weights".into()))?;
            let ws = weight_list(forest, text, "1")?
                .iter()
                .map(|w| {
                    w.parse::<u64>()
                        .map_err(|_| CliError::Usage(format!("weight {w:?} is not a positive integer")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            weights = Some(WeightMap::new(ws)?);
        }
        if any(|k| k == Kind::Lime) {
            let text = self
                .weights
                .as_deref()
                .ok_or_else(|| CliError::Usage("lime reasons need the surrogate's --weights".into()))?;
            let ws = weight_list(forest, text, "0")?
                .iter()
                .map(|w| parse_rational(w))
                .collect::<Result<Vec<_>, _>>()?;
            lime = Some(LinearModel::new(ws));
        }
        let permutations = self.permutations.unwrap_or(1);
        if permutations == 0 {
            return Err(CliError::Usage("--permutations must be at least 1".into()));
        }
        let timeout = match self.timeout {
            Some(t) if !(t >= 0.0 && t.is_finite()) => {
                return Err(CliError::Usage(format!("--timeout {t} is not a duration")))
            }
            Some(t) => Some(Duration::from_secs_f64(t)),
            None => None,
        };
        let order = match &self.order {
            Some(s) => feature_list(forest, s)?,
            None => Vec::new(),
        };
        Ok(Settings {
            delta,
            strata,
            intelligible,
            weights,
            lime,
            notion,
            permutations,
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            timeout,
            order,
        })
    }
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Done(Reason),
    /// Budget ran out; the reason is valid but not the kind's final answer.
    Partial(Reason),
    NoComprehensible,
}

impl Outcome {
    pub fn reason(&self) -> Option<&Reason> {
        match self {
            Outcome::Done(r) | Outcome::Partial(r) => Some(r),
            Outcome::NoComprehensible => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            Outcome::Done(r) if r.fallback => "fallback",
            Outcome::Done(_) => "ok",
            Outcome::Partial(r) if r.fallback => "fallback",
            Outcome::Partial(_) => "partial",
            Outcome::NoComprehensible => "none",
        }
    }
}

fn only_tree(forest: &RandomForest) -> &DecisionTree {
    &forest.trees()[0]
}

fn notion_oracle(forest: &RandomForest, x: &Instance, s: &Settings) -> Result<ImplicantOracle, CliError> {
    Ok(match s.notion {
        Notion::Sufficient => {
            let mut o = ImplicantOracle::forest_sat_for(forest, x)?;
            o.set_deadline(s.timeout.map(|t| Instant::now() + t));
            o
        }
        Notion::Majority => ImplicantOracle::majority_for(forest, x)?,
        Notion::DeltaProbable => {
            ImplicantOracle::delta_probable_for(only_tree(forest), x, s.delta.clone().expect("checked"))?
        }
    })
}

fn partial_from_timeout(e: Error, kind: ReasonKind, x: &Instance, label: bool) -> Result<Outcome, CliError> {
    match e {
        Error::Timeout { partial: Some(t) } => Ok(Outcome::Partial(Reason::new(t, kind, x.clone(), label))),
        Error::BudgetExhausted { fallback } => Ok(Outcome::Partial(*fallback)),
        other => Err(other.into()),
    }
}

/// Runs one explanation. `on_improve` sees every intermediate reason of
/// anytime kinds.
pub fn compute(
    forest: &RandomForest,
    x: &Instance,
    kind: Kind,
    s: &Settings,
    on_improve: &mut dyn FnMut(&Reason),
) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let label = forest.eval(x)?;
    let anytime = |r: Reason| {
        if r.optimal {
            Outcome::Done(r)
        } else {
            Outcome::Partial(r)
        }
    };
    let outcome = match kind {
        Kind::Direct => Outcome::Done(direct_reason(forest, x)?),
        Kind::Sufficient => match sufficient_reason_rf(forest, x, &s.order, s.timeout) {
            Ok(r) => Outcome::Done(r),
            Err(e) => partial_from_timeout(e, ReasonKind::Sufficient, x, label)?,
        },
        Kind::Majoritary if s.permutations > 1 => {
            Outcome::Done(majoritary_reason_multi(forest, x, s.permutations, s.seed)?)
        }
        Kind::Majoritary => Outcome::Done(majoritary_reason(forest, x, &s.order)?),
        Kind::MinimalMajoritary => match minimal_majoritary_reason(forest, x, s.timeout, |r| on_improve(r)) {
            Ok((r, _)) => anytime(r),
            Err(e) => partial_from_timeout(e, ReasonKind::MinimalMajoritary, x, label)?,
        },
        Kind::MinimalWeight => {
            let w = s.weights.as_ref().expect("checked");
            match minimal_weight_majoritary_reason(forest, x, w, s.timeout) {
                Ok(r) => anytime(r),
                Err(e) => partial_from_timeout(e, ReasonKind::MinimalWeight, x, label)?,
            }
        }
        Kind::MinimalSufficient => match minimal_sufficient_reason_dt(only_tree(forest), x, s.timeout) {
            Ok(r) => anytime(r),
            Err(e) => partial_from_timeout(e, ReasonKind::MinimalSufficient, x, label)?,
        },
        Kind::ApproxMinimal => Outcome::Done(approx_minimal_reason_dt(only_tree(forest), x)?),
        Kind::DeltaProbable => Outcome::Done(delta_probable_reason_dt(
            only_tree(forest),
            x,
            s.delta.as_ref().expect("checked"),
            &s.order,
        )?),
        Kind::Comprehensible => {
            let mut oracle = notion_oracle(forest, x, s)?;
            let intelligible = s.intelligible.as_deref().expect("checked");
            match comprehensible_reason(&mut oracle, x, intelligible, &s.order) {
                Ok(Some(r)) => Outcome::Done(r),
                Ok(None) => Outcome::NoComprehensible,
                Err(e) => partial_from_timeout(e, ReasonKind::Comprehensible, x, label)?,
            }
        }
        Kind::InclusionPreferred => {
            let mut oracle = notion_oracle(forest, x, s)?;
            match inclusion_preferred_reason(&mut oracle, x, s.strata.as_ref().expect("checked")) {
                Ok(r) => Outcome::Done(r),
                Err(e) => partial_from_timeout(e, ReasonKind::InclusionPreferred, x, label)?,
            }
        }
        Kind::Lime => Outcome::Done(lime_linear_reason(s.lime.as_ref().expect("checked"), x)?),
    };
    Ok(match outcome {
        Outcome::Done(r) => Outcome::Done(finish(r, kind, label, start)),
        Outcome::Partial(r) => Outcome::Partial(finish(r, kind, label, start)),
        none => none,
    })
}

fn finish(mut r: Reason, kind: Kind, label: bool, start: Instant) -> Reason {
    // lime explains the surrogate, whose label may differ from the forest's
    if kind != Kind::Lime {
        r.prediction = label;
    }
    if r.elapsed.is_zero() {
        r.elapsed = start.elapsed();
    }
    r
}

/// Checks a reason against the oracle of its kind. Failure means a bug.
pub fn validate(forest: &RandomForest, kind: Kind, s: &Settings, r: &Reason) -> Result<(), CliError> {
    let x = &r.instance;
    let fail = |what: &str| {
        Err(CliError::Validation(format!(
            "{} reason {}: {what}",
            kind.name(),
            r.term
        )))
    };
    if !r.covers_instance() {
        return fail("does not cover the instance");
    }
    let accepted = match kind {
        Kind::Lime => s.lime.as_ref().expect("checked").entails(&r.term, r.prediction),
        Kind::Direct | Kind::Majoritary | Kind::MinimalMajoritary | Kind::MinimalWeight => {
            ImplicantOracle::majority_for(forest, x)?.accepts(&r.term)?
        }
        Kind::Sufficient | Kind::MinimalSufficient | Kind::ApproxMinimal => {
            ImplicantOracle::forest_sat_for(forest, x)?.accepts(&r.term)?
        }
        Kind::DeltaProbable => {
            ImplicantOracle::delta_probable_for(only_tree(forest), x, s.delta.clone().expect("checked"))?
                .accepts(&r.term)?
        }
        Kind::Comprehensible | Kind::InclusionPreferred => {
            let mut settings = s.clone();
            settings.timeout = None;
            notion_oracle(forest, x, &settings)?.accepts(&r.term)?
        }
    };
    if !accepted {
        return fail("rejected by its oracle");
    }
    if kind == Kind::Comprehensible {
        let allowed = s.intelligible.as_deref().expect("checked");
        if r.term.vars().any(|v| !allowed.contains(&v)) {
            return fail("uses a feature outside the intelligible set");
        }
    }
    Ok(())
}

pub fn render_term(forest: &RandomForest, t: &Term) -> String {
    if t.is_empty() {
        return "⊤".into();
    }
    t.iter()
        .map(|l| {
            let name = forest.feature_name(l.var());
            if l.is_positive() {
                name
            } else {
                format!("¬{name}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ∧ ")
}

/// Machine-readable form of one explanation.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub instance: String,
    pub kind: &'static str,
    pub status: &'static str,
    pub prediction: Option<u8>,
    pub reason: Option<String>,
    pub literals: Option<Vec<i64>>,
    pub size: Option<usize>,
    pub elapsed_ms: Option<f64>,
    pub optimal: Option<bool>,
    pub cost: Option<u64>,
    pub probability: Option<String>,
}

impl Record {
    pub fn new(forest: &RandomForest, x: &Instance, kind: Kind, outcome: &Outcome) -> Self {
        let r = outcome.reason();
        Record {
            instance: bit_string(x),
            kind: kind.name(),
            status: outcome.status(),
            prediction: r.map(|r| u8::from(r.prediction)),
            reason: r.map(|r| render_term(forest, &r.term)),
            literals: r.map(|r| r.term.iter().map(|l| l.to_dimacs()).collect()),
            size: r.map(Reason::size),
            elapsed_ms: r.map(|r| r.elapsed.as_secs_f64() * 1e3),
            optimal: r.map(|r| r.optimal),
            cost: r.and_then(|r| r.cost),
            probability: r.and_then(|r| r.probability.as_ref()).map(|p| p.to_string()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "instance: {}\nkind: {}\nstatus: {}\n",
            self.instance, self.kind, self.status
        );
        if self.reason.is_none() {
            out.push_str("no comprehensible reason\n");
            return out;
        }
        if let Some(p) = self.prediction {
            out.push_str(&format!("prediction: {p}\n"));
        }
        if let Some(r) = &self.reason {
            out.push_str(&format!("reason: {r}\n"));
        }
        if let Some(s) = self.size {
            out.push_str(&format!("size: {s}\n"));
        }
        if let Some(c) = self.cost {
            out.push_str(&format!("cost: {c}\n"));
            out.push_str(&format!(
                "optimal: {}\n",
                if self.optimal == Some(true) { "yes" } else { "no" }
            ));
        }
        if let Some(p) = &self.probability {
            out.push_str(&format!("probability: {p}\n"));
        }
        if let Some(ms) = self.elapsed_ms {
            out.push_str(&format!("elapsed_ms: {ms:.3}\n"));
        }
        out
    }
}

/// The MaxSAT instance behind an optimisation kind, in WCNF.
pub fn export_wcnf(forest: &RandomForest, x: &Instance, kind: Kind, s: &Settings) -> Result<String, CliError> {
    let weights = match kind {
        Kind::MinimalWeight => s.weights.clone().expect("checked"),
        Kind::MinimalMajoritary | Kind::MinimalSufficient => WeightMap::uniform(forest.var_count()),
        other => {
            return Err(CliError::Usage(format!(
                "--export-wcnf applies to optimisation kinds, not {}",
                other.name()
            )))
        }
    };
    let (_, oriented) = forest.oriented_for(x)?;
    let problem = majoritary_wcnf(&oriented, x, &weights)?;
    Ok(rfx_core::sat::dimacs::write_wcnf(&problem))
}
