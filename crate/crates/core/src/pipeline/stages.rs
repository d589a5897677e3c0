use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use super::{DataSpace, Inputs, OutputFormat, PipelineConfig, PipelineError, STAGE_NAMES};
use crate::domain::{execute_method, interpret, replay, DomainSignature, GroundAtom, MethodRun, Value};
use crate::inference::{
    deduce, induce, validate, ConjectureStatus, Deduction, Outcome, QuantifiedConjecture, Target, ValidationMethod, ValidationRecord,
};
use crate::information::{build_pieces, deductive_preorder_topology, PieceOfInformation, Provenance, Relation};
use crate::knowledge::{
    build_knowledge_spaces, chapters_dot, check_assumption, dag_dot, decompose_chapters, decompose_sections, product_preorder, uniqueness_notes,
    ChapterRule, DerivationDag, KnowledgeBaseDoc, KnowledgeContent, KnowledgeObject, KnowledgeSpaces,
};
use crate::metric::{betti_numbers, clusters, rips_complex, similarity_graph, verify_metric};
use crate::topology::{
    count_upper_sets, is_compact, is_connected, is_discrete, is_metrizable, is_t1, specialization_preorder, Preorder, MAX_ELEMENTS,
};

/// Open sets are counted, not enumerated, up to this many.
pub const OPEN_COUNT_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub format: OutputFormat,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct StageOutput {
    pub stage: usize,
    pub artifacts: Vec<Artifact>,
    /// Plain-text summary, also written as the stage's `.txt` artifact.
    pub summary: String,
}

struct Builder {
    stage: usize,
    artifacts: Vec<Artifact>,
    text: String,
}

impl Builder {
    fn new(stage: usize) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "== {stage} {} ==", STAGE_NAMES[stage - 1]);
        Self { stage, artifacts: Vec::new(), text }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn file(&mut self, suffix: &str, format: OutputFormat, contents: String) {
        let name = format!("{:02}-{suffix}", self.stage);
        self.artifacts.push(Artifact { name, format, contents });
    }

    fn json(&mut self, value: &impl Serialize) {
        let mut s = serde_json::to_string_pretty(value).expect("artifacts serialize");
        s.push('\n');
        let name = format!("{}.json", STAGE_NAMES[self.stage - 1]);
        self.file(&name, OutputFormat::Json, s);
    }

    fn finish(mut self) -> StageOutput {
        let name = format!("{}.txt", STAGE_NAMES[self.stage - 1]);
        let text = self.text.clone();
        self.file(&name, OutputFormat::Text, text);
        StageOutput { stage: self.stage, artifacts: self.artifacts, summary: self.text }
    }
}

fn semantic(e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Semantic(e.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// An atom, followed by its reading when the relation has a gloss.
fn statement(sig: &DomainSignature, atom: &GroundAtom) -> String {
    match sig.gloss(atom) {
        Some(g) => format!("{atom}: {g}"),
        None => atom.to_string(),
    }
}

fn values(vs: &[Value]) -> String {
    vs.iter().map(Value::to_string).collect::<Vec<_>>().join(", ")
}

struct AppliedMethod {
    method: String,
    inputs: Vec<String>,
    run: MethodRun,
    goal: Option<GroundAtom>,
}

impl AppliedMethod {
    fn trace_id(&self) -> String {
        format!("trace:{}({})", self.method, values(&self.run.trace.inputs))
    }
}

#[derive(Default)]
struct Run {
    space: Option<DataSpace>,
    interpreted: BTreeSet<GroundAtom>,
    applied: Vec<AppliedMethod>,
    atoms: BTreeSet<GroundAtom>,
    deduction: Deduction,
    conjectures: Vec<(QuantifiedConjecture, ValidationRecord)>,
    method_checks: BTreeMap<String, ValidationRecord>,
    atom_checks: BTreeMap<GroundAtom, ValidationRecord>,
    spaces: Option<KnowledgeSpaces>,
}

/// Runs stages `1..=config.stage` in order. Returns the outputs of the
/// stages that completed and the error that stopped the run, if any.
pub fn run_stages(inputs: &Inputs, config: &PipelineConfig) -> (Vec<StageOutput>, Option<PipelineError>) {
    let mut run = Run::default();
    let mut outputs = Vec::new();
    for stage in 1..=config.stage {
        log::info!("stage {stage}: {}", STAGE_NAMES[stage - 1]);
        let result = match stage {
            1 => data_space(&mut run, inputs),
            2 => cluster_stage(&mut run, inputs, config),
            3 => interpretation_stage(&mut run, inputs),
            4 => information_stage(&mut run, inputs),
            5 => inference_stage(&mut run, inputs, config),
            6 => knowledge_stage(&mut run, inputs),
            _ => decomposition_stage(&mut run),
        };
        match result {
            Ok(o) => outputs.push(o),
            Err(e) => {
                log::error!("stage {stage} failed: {e}");
                return (outputs, Some(e));
            }
        }
    }
    (outputs, None)
}

fn data_space(run: &mut Run, inputs: &Inputs) -> Result<StageOutput, PipelineError> {
    let space = inputs
        .dataset
        .build()
        .map_err(|e| PipelineError::Input(format!("dataset: {e}")))?
        .map_err(|violations| semantic(format!("the open sets do not form a topology: {}", violations.join("; "))))?;
    let t = &space.topology;
    let g = t.ground();
    let mut b = Builder::new(1);
    b.line(format!("elements: {}", g.elements().join(", ")));
    b.line(format!("open sets: {}", t.len()));
    for o in t.opens() {
        b.line(format!("  {}", g.format_mask(*o)));
    }
    let props = [
        ("compact", is_compact(t)),
        ("t1", is_t1(t)),
        ("discrete", is_discrete(t)),
        ("connected", is_connected(t)),
        ("metrizable", is_metrizable(t)),
    ];
    b.line(format!("properties: {}", props.iter().map(|(k, v)| format!("{k} {}", yes_no(*v))).collect::<Vec<_>>().join(", ")));
    let pre = specialization_preorder(t);
    let strict: Vec<(String, String)> = pre.pairs().filter(|(i, j)| i != j).map(|(i, j)| (g.name(i).to_string(), g.name(j).to_string())).collect();
    b.line(format!("specialization pairs: {}", strict.len()));
    for (label, mask) in &space.dstar.labels {
        b.line(format!("label {label} = {}", g.format_mask(*mask)));
    }
    let labels: BTreeMap<&String, Vec<&str>> = space.dstar.labels.iter().map(|(l, m)| (l, g.names_of(*m))).collect();
    b.json(&json!({
        "elements": g.elements(),
        "opens": t.named_opens(),
        "properties": props.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
        "specialization": strict,
        "labels": labels,
        "data_functions": space.dstar.functions.iter().map(|f| f.name()).collect::<Vec<_>>(),
        "data_relations": space.dstar.relations.iter().map(|r| r.name()).collect::<Vec<_>>(),
    }));
    run.space = Some(space);
    Ok(b.finish())
}

fn cluster_stage(run: &mut Run, inputs: &Inputs, config: &PipelineConfig) -> Result<StageOutput, PipelineError> {
    let mut b = Builder::new(2);
    let space = run.space.as_ref().expect("stage 1 ran");
    let Some(m) = &space.metric else {
        b.line("no metric given");
        b.json(&json!({ "metric": null }));
        b.file("complex.txt", OutputFormat::Text, String::new());
        return Ok(b.finish());
    };
    let report = verify_metric(m);
    if !report.valid {
        let shown: Vec<String> = report.violations.iter().take(5).map(|v| v.describe(m.ground())).collect();
        return Err(semantic(format!("the distance table is not a metric: {}", shown.join("; "))));
    }
    let epsilon = config.epsilon.or(inputs.dataset.epsilon).unwrap_or(0.0);
    if !(epsilon.is_finite() && epsilon >= 0.0) {
        return Err(PipelineError::Input(format!("dataset: epsilon must be a nonnegative number, got {epsilon}")));
    }
    let g = m.ground();
    let graph = similarity_graph(m, epsilon).map_err(semantic)?;
    let parts = clusters(m, epsilon).map_err(semantic)?;
    let complex = rips_complex(m, epsilon, config.max_dim).map_err(semantic)?;
    // β_k needs the (k+1)-simplices, so homology is read off one dimension up.
    let betti = betti_numbers(&rips_complex(m, epsilon, config.max_dim + 1).map_err(semantic)?, config.max_dim);
    let named = parts.named(g);
    b.line(format!("epsilon: {epsilon}"));
    b.line(format!("similar pairs: {}", graph.edges.len()));
    b.line(format!("clusters: {}", named.len()));
    for c in &named {
        b.line(format!("  {{{}}}", c.join(", ")));
    }
    let counts: Vec<usize> = (0..=complex.dim()).map(|k| complex.count(k)).collect();
    b.line(format!("rips complex (max dim {}): simplices per dimension {:?}", config.max_dim, counts));
    b.line(format!("betti numbers: {betti:?}"));
    let pairs: Vec<(&str, &str)> = graph.edges.iter().map(|&(i, j)| (g.name(i), g.name(j))).collect();
    b.json(&json!({
        "epsilon": epsilon,
        "max_dim": config.max_dim,
        "similar_pairs": pairs,
        "clusters": named,
        "simplices_per_dimension": counts,
        "betti": betti,
    }));
    let text: String = complex
        .export_text()
        .lines()
        .map(|l| l.split(',').map(|i| g.name(i.parse().expect("vertex index"))).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    b.file("complex.txt", OutputFormat::Text, text);
    Ok(b.finish())
}

fn interpretation_stage(run: &mut Run, inputs: &Inputs) -> Result<StageOutput, PipelineError> {
    let space = run.space.as_ref().expect("stage 1 ran");
    let sig = &inputs.signature;
    let result = interpret(&space.dstar, &inputs.interpretation.map(), sig).map_err(semantic)?;
    let mut b = Builder::new(3);
    b.line(format!("domain: {}", sig.name));
    for (label, v) in &result.assignments {
        b.line(format!("{label} -> {v}"));
    }
    b.line(format!("interpreted relations: {}", result.atoms.len()));
    for a in &result.atoms {
        b.line(format!("  {}", statement(sig, a)));
    }
    let mut applied = Vec::new();
    for app in &inputs.interpretation.methods {
        let spec = sig.method(&app.method).ok_or_else(|| semantic(format!("unknown method `{}`", app.method)))?;
        let args = app
            .inputs
            .iter()
            .map(|l| result.assignments.get(l).cloned().ok_or_else(|| semantic(format!("method `{}`: unknown label `{l}`", app.method))))
            .collect::<Result<Vec<_>, _>>()?;
        let run = execute_method(spec, sig, &args).map_err(|e| semantic(format!("method `{}`: {e}", app.method)))?;
        let goal = run.goal_atom(spec);
        b.line(format!("method {}({}) = {}", app.method, values(&args), values(&run.outputs)));
        if let Some(g) = &goal {
            b.line(format!("  {}", statement(sig, g)));
        }
        applied.push(AppliedMethod { method: app.method.clone(), inputs: app.inputs.clone(), run, goal });
    }
    let atoms_json: Vec<_> = result.atoms.iter().map(|a| json!({ "atom": a.to_string(), "gloss": sig.gloss(a), "value": a })).collect();
    let runs_json: Vec<_> = applied
        .iter()
        .map(|a| {
            json!({
                "method": a.method,
                "labels": a.inputs,
                "outputs": a.run.outputs,
                "goal": a.goal.as_ref().map(|g| g.to_string()),
                "gloss": a.goal.as_ref().and_then(|g| sig.gloss(g)),
                "trace": a.run.trace,
            })
        })
        .collect();
    b.json(&json!({
        "domain": sig.name,
        "assignments": result.assignments,
        "atoms": atoms_json,
        "method_runs": runs_json,
    }));
    run.interpreted = result.atoms;
    run.atoms = run.interpreted.clone();
    run.atoms.extend(applied.iter().filter_map(|a| a.goal.clone()));
    run.applied = applied;
    Ok(b.finish())
}

fn information_stage(run: &mut Run, inputs: &Inputs) -> Result<StageOutput, PipelineError> {
    let sig = &inputs.signature;
    for r in &inputs.rules {
        r.check(sig).map_err(semantic)?;
    }
    let pieces = build_pieces(&run.atoms, &[]);
    if pieces.len() > MAX_ELEMENTS {
        return Err(semantic(format!("{} pieces exceed the {MAX_ELEMENTS}-piece limit of the information structure", pieces.len())));
    }
    let space = deductive_preorder_topology(pieces, |facts| deduce(facts, &inputs.rules, sig).expect("rules checked").closure).map_err(semantic)?;
    let mut b = Builder::new(4);
    b.line(format!("pieces of information: {}", space.pieces.len()));
    for (i, p) in space.pieces.iter().enumerate() {
        b.line(format!("s{i} over {}", p.label()));
        for r in &p.relations {
            match r {
                Relation::Atom(a) => b.line(format!("  {}", statement(sig, a))),
                Relation::Formula(f) => b.line(format!("  {f}")),
            }
        }
    }
    b.line(format!("open sets of the deductive structure: {}", space.structure.len()));
    b.json(&space.to_json());
    b.file("information.dot", OutputFormat::Dot, space.to_dot());
    Ok(b.finish())
}

fn single_piece(atom: &GroundAtom) -> PieceOfInformation {
    PieceOfInformation { objects: atom.objects(), relations: [Relation::Atom(atom.clone())].into(), provenance: Provenance::Interpreted }
}

fn inference_stage(run: &mut Run, inputs: &Inputs, config: &PipelineConfig) -> Result<StageOutput, PipelineError> {
    let sig = &inputs.signature;
    let deduction = deduce(&run.atoms, &inputs.rules, sig).map_err(semantic)?;
    let mut b = Builder::new(5);
    b.line(format!("rules: {}", inputs.rules.len()));
    for r in &inputs.rules {
        b.line(format!("  {r}"));
    }
    b.line(format!("deduced relations: {}", deduction.derivations.len()));
    for (atom, why) in &deduction.derivations {
        let premises: Vec<String> = why.premises.iter().map(GroundAtom::to_string).collect();
        b.line(format!("  {} by {} from {}", statement(sig, atom), why.rule, premises.join(", ")));
    }

    for atom in &run.atoms {
        let record = validate(Target::Piece(&single_piece(atom)), ValidationMethod::ByExhaustiveVerification, sig, &run.atoms).map_err(semantic)?;
        let record = match sig.relation(&atom.relation).and_then(|r| r.extension.as_ref()) {
            Some(_) => record,
            None => {
                let mut r = validate(Target::Piece(&single_piece(atom)), ValidationMethod::ByAssumption, sig, &run.atoms).map_err(semantic)?;
                r.note = Some("interpreted from the data space".into());
                r
            }
        };
        if record.outcome != Outcome::Valid {
            b.line(format!("rejected: {atom} ({})", record.note.as_deref().unwrap_or("invalid")));
        }
        run.atom_checks.insert(atom.clone(), record);
    }

    let conjectures = induce(&deduction.closure, sig, config.min_support);
    b.line(format!("conjectures (min support {}): {}", config.min_support, conjectures.len()));
    for mut c in conjectures {
        let record = validate(Target::Conjecture(&c), ValidationMethod::ByExhaustiveVerification, sig, &deduction.closure).map_err(semantic)?;
        c.status = match record.outcome {
            Outcome::Valid => ConjectureStatus::Validated,
            Outcome::Invalid => ConjectureStatus::Refuted,
            Outcome::Undetermined => ConjectureStatus::Conjectured,
        };
        let verdict = match c.status {
            ConjectureStatus::Validated => format!("validated by exhaustive verification over {} cases", record.checked),
            ConjectureStatus::Refuted => format!("refuted: {}", record.note.as_deref().unwrap_or("counterexample found")),
            ConjectureStatus::Conjectured => "undetermined".to_string(),
        };
        b.line(format!("  {} (support {}): {verdict}", c.formula, c.support));
        run.conjectures.push((c, record));
    }

    let mut seen = BTreeSet::new();
    for a in &run.applied {
        if !seen.insert(a.method.clone()) {
            continue;
        }
        let spec = sig.method(&a.method).expect("checked in stage 3");
        let record = match validate(Target::Method(spec), ValidationMethod::ByExhaustiveVerification, sig, &deduction.closure) {
            Ok(r) => r,
            Err(e) => {
                let mut r = validate(Target::Method(spec), ValidationMethod::ByBelief, sig, &deduction.closure).map_err(semantic)?;
                r.outcome = Outcome::Undetermined;
                r.note = Some(e.to_string());
                r
            }
        };
        let verdict = match record.outcome {
            Outcome::Valid => format!("valid by exhaustive verification over {} inputs", record.checked),
            Outcome::Invalid => format!("invalid: {}", record.note.as_deref().unwrap_or("")),
            Outcome::Undetermined => format!("undetermined: {}", record.note.as_deref().unwrap_or("")),
        };
        b.line(format!("method {}: {verdict}", a.method));
        run.method_checks.insert(a.method.clone(), record);
    }

    let deduced: Vec<_> = deduction
        .derivations
        .iter()
        .map(|(a, why)| json!({ "atom": a.to_string(), "gloss": sig.gloss(a), "rule": why.rule, "bindings": why.bindings, "premises": why.premises.iter().map(|p| p.to_string()).collect::<Vec<_>>() }))
        .collect();
    let conj: Vec<_> = run
        .conjectures
        .iter()
        .map(|(c, r)| json!({ "formula": c.formula.to_string(), "support": c.support, "counterexamples": c.counterexamples, "status": c.status, "validation": r }))
        .collect();
    let rejected: Vec<_> =
        run.atom_checks.iter().filter(|(_, r)| r.outcome != Outcome::Valid).map(|(a, r)| json!({ "atom": a.to_string(), "validation": r })).collect();
    b.json(&json!({
        "rules": inputs.rules.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "deduced": deduced,
        "conjectures": conj,
        "methods": run.method_checks,
        "rejected_atoms": rejected,
    }));
    run.deduction = deduction;
    Ok(b.finish())
}

#[derive(Default)]
struct Admitted {
    objects: Vec<KnowledgeObject>,
    ids: BTreeSet<String>,
}

impl Admitted {
    /// Adds the object unless its validation fails; true when it is in.
    fn admit(&mut self, id: String, content: KnowledgeContent, mut v: ValidationRecord) -> bool {
        if self.ids.contains(&id) {
            return true;
        }
        if v.target.is_empty() {
            v.target = id.clone();
        }
        match KnowledgeObject::new(id.clone(), content, v) {
            Ok(o) => {
                self.objects.push(o);
                self.ids.insert(id);
                true
            }
            Err(_) => false,
        }
    }

    fn contains(&self, id: &str) -> bool {
        self.ids.contains(id)
    }
}

fn record(activity: &str, summary: String) -> KnowledgeContent {
    KnowledgeContent::Record { activity: activity.into(), summary }
}

fn knowledge_stage(run: &mut Run, inputs: &Inputs) -> Result<StageOutput, PipelineError> {
    let sig = &inputs.signature;
    let assumed = |note: &str| ValidationRecord {
        target: String::new(),
        method: ValidationMethod::ByAssumption,
        outcome: Outcome::Valid,
        witness: None,
        note: Some(note.to_string()),
        checked: 0,
    };
    let mut kb = Admitted::default();
    let mut edges: Vec<(String, String)> = Vec::new();

    let atom_ok = |a: &GroundAtom| run.atom_checks.get(a).is_some_and(|r| r.outcome == Outcome::Valid);
    if !run.interpreted.is_empty() {
        let summary = format!("{} relations interpreted in {}", run.interpreted.len(), sig.name);
        kb.admit("interpretation".into(), record("interpretation", summary), assumed("record of a completed run"));
        for a in run.interpreted.iter().filter(|a| atom_ok(a)) {
            kb.admit(a.to_string(), KnowledgeContent::Atom(a.clone()), run.atom_checks[a].clone());
            edges.push(("interpretation".into(), a.to_string()));
        }
    }
    for app in &run.applied {
        let spec = sig.method(&app.method).expect("checked in stage 3");
        let method_id = format!("method:{}", app.method);
        let method_in = run.method_checks.get(&app.method).is_some_and(|r| r.outcome == Outcome::Valid)
            && kb.admit(method_id.clone(), KnowledgeContent::Method(spec.clone()), run.method_checks[&app.method].clone());
        let replayed = replay(&app.run.trace, sig).is_ok_and(|outs| outs == app.run.outputs);
        if !replayed {
            continue;
        }
        let trace_id = app.trace_id();
        let mut v = assumed("replayed against the domain functions");
        v.method = ValidationMethod::ByExhaustiveVerification;
        v.checked = app.run.trace.operations.len();
        kb.admit(trace_id.clone(), KnowledgeContent::Trace(app.run.trace.clone()), v);
        if method_in {
            edges.push((method_id, trace_id.clone()));
        }
        if kb.contains("interpretation") {
            edges.push(("interpretation".into(), trace_id.clone()));
        }
        if let Some(g) = app.goal.as_ref().filter(|g| atom_ok(g)) {
            kb.admit(g.to_string(), KnowledgeContent::Atom(g.clone()), run.atom_checks[g].clone());
            edges.push((trace_id, g.to_string()));
        }
    }
    // Deduced atoms enter once all their premises are in.
    let mut pending: Vec<_> = run.deduction.derivations.iter().collect();
    loop {
        let before = pending.len();
        pending.retain(|(atom, why)| {
            if !why.premises.iter().all(|p| kb.contains(&p.to_string())) {
                return true;
            }
            let proof = format!("proof:{atom}");
            let premises: Vec<String> = why.premises.iter().map(GroundAtom::to_string).collect();
            let summary = format!("{} applied to {} gives {atom}", why.rule, premises.join(", "));
            kb.admit(proof.clone(), record("deduction", summary), assumed("sound rule application"));
            let v = assumed(&format!("deduced by {} from validated premises", why.rule));
            kb.admit(atom.to_string(), KnowledgeContent::Atom((*atom).clone()), v);
            for p in premises {
                edges.push((p, proof.clone()));
            }
            edges.push((proof, atom.to_string()));
            false
        });
        if pending.len() == before {
            break;
        }
    }
    for (c, r) in run.conjectures.iter().filter(|(c, _)| c.status == ConjectureStatus::Validated) {
        let verify = format!("verify:{}", c.formula);
        let summary = format!("{} bindings checked, none fails", r.checked);
        kb.admit(verify.clone(), record("verification", summary), assumed("record of a completed run"));
        kb.admit(c.formula.to_string(), KnowledgeContent::Formula(c.formula.clone()), r.clone());
        for s in c.supporting.iter().filter(|s| kb.contains(&s.to_string())) {
            edges.push((s.to_string(), verify.clone()));
        }
        edges.push((verify, c.formula.to_string()));
    }

    let spaces = build_knowledge_spaces(kb.objects, &edges).map_err(semantic)?;
    let mut b = Builder::new(6);
    b.line(format!("declarative objects: {}", spaces.k_t.len()));
    for id in spaces.k_t.ids() {
        let o = &spaces.objects[id];
        let line = match &o.content {
            KnowledgeContent::Atom(a) => statement(sig, a),
            _ => id.clone(),
        };
        b.line(format!("  {line}"));
    }
    b.line(format!("procedural objects: {}", spaces.k_p.len()));
    for id in spaces.k_p.ids() {
        b.line(format!("  {id}"));
    }
    b.line(format!("cross derivations: {}", spaces.cross.len()));
    let order = |dag: &DerivationDag| (!dag.is_empty()).then(|| dag.reachability_preorder().ok()).flatten();
    let (t_order, p_order) = (order(&spaces.k_t), order(&spaces.k_p));
    let product = t_order.as_ref().zip(p_order.as_ref()).and_then(|(t, p)| product_preorder(t, p).ok());
    let count = |p: Option<&Preorder>| p.and_then(|p| count_upper_sets(p, OPEN_COUNT_LIMIT));
    let (t_opens, p_opens, product_opens) = (count(t_order.as_ref()), count(p_order.as_ref()), count(product.as_ref()));
    let describe = |o: Option<u64>| {
        o.map_or(format!("not computed (empty, more than {MAX_ELEMENTS} points or more than {OPEN_COUNT_LIMIT} open sets)"), |n| n.to_string())
    };
    b.line(format!("open sets of K_T: {}", describe(t_opens)));
    b.line(format!("open sets of K_P: {}", describe(p_opens)));
    b.line(format!("open sets of K_T x K_P: {}", describe(product_opens)));
    let doc = KnowledgeBaseDoc::new(&spaces, &edges);
    b.json(&json!({
        "knowledge_base": doc,
        "structure": {
            "k_t_opens": t_opens,
            "k_p_opens": p_opens,
            "product_opens": product_opens,
        },
    }));
    b.file("knowledge.dot", OutputFormat::Dot, dag_dot("K_T", &spaces.k_t, &[]) + &dag_dot("K_P", &spaces.k_p, &[]));
    run.spaces = Some(spaces);
    Ok(b.finish())
}

fn decomposition_stage(run: &mut Run) -> Result<StageOutput, PipelineError> {
    let spaces = run.spaces.as_ref().expect("stage 6 ran");
    let report = check_assumption(&spaces.k_t, &spaces.k_p, &spaces.cross);
    if !report.holds() {
        return Err(semantic(format!("chapters need the assumption: {}", report.describe())));
    }
    let d = decompose_chapters(&spaces.k_t, &spaces.k_p, &spaces.cross, ChapterRule::Linked).map_err(semantic)?;
    debug_assert_eq!(d.sections_t, decompose_sections(&spaces.k_t));
    let notes_t = uniqueness_notes(&spaces.k_t);
    let notes_p = uniqueness_notes(&spaces.k_p);
    let mut b = Builder::new(7);
    for (name, sections, notes) in [("K_T", &d.sections_t, &notes_t), ("K_P", &d.sections_p, &notes_p)] {
        b.line(format!("sections of {name}: {}", sections.len()));
        for (i, s) in sections.iter().enumerate() {
            b.line(format!("  {}. [{}] ({})", i + 1, s.members.join(", "), s.form));
        }
        for n in notes.iter() {
            match n.decompositions {
                Some(1) => {}
                Some(k) => {
                    b.line(format!("  note: the component {{{}}} has {k} longest-chain decompositions; ties broken by id", n.component.join(", ")))
                }
                None => {
                    b.line(format!("  note: uniqueness not checked for the {}-object component starting at {}", n.component.len(), n.component[0]))
                }
            }
        }
    }
    b.line(format!("chapters: {}", d.chapters.len()));
    for (i, c) in d.chapters.iter().enumerate() {
        b.line(format!("  {}. [{}] x [{}]", i + 1, c.k_t.members.join(", "), c.k_p.members.join(", ")));
    }
    for (i, j) in &d.empty_pairs {
        b.line(format!("  sections T{} and P{} are linked but host no chapter", i + 1, j + 1));
    }
    b.json(&json!({
        "sections_t": d.sections_t,
        "sections_p": d.sections_p,
        "uniqueness_t": notes_t,
        "uniqueness_p": notes_p,
        "assumption": report,
        "chapter_rule": d.rule,
        "chapters": d.chapters,
        "empty_pairs": d.empty_pairs,
    }));
    b.file("decomposition.dot", OutputFormat::Dot, chapters_dot(&spaces.k_t, &spaces.k_p, &spaces.cross, &d));
    Ok(b.finish())
}
