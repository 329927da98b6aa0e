use std::path::Path;
use std::time::Instant;

use excon::context::{is_exact_pair, is_rigid, check_ring_epi_implies_exact_pair, ContextError};
use excon::dsl::{print_algebra, ContextKind, ContextValue, Environment, Value};
use excon::field::Field;
use excon::homological::{bimodule_sides, is_homological_up_to, projective_dimension, tor, ProjectiveDimension};
use excon::module::{Module, Side};
use excon::nctensor::{
    build_nc_tensor, build_theta, compare_structure, morita_identification, nc_tensor_morita_oracle,
    nc_tensor_pure_oracle, pd_inequality_check, pure_identification, ring_axiom_suite, theorem1_criterion,
    verify_localization_properties, NcError, NcTensorRing,
};

use crate::error::{usage, CliError};
use crate::modules::resolve;
use crate::report::{matrix_json, Kind, Report, Status};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Oracle {
    None,
    Morita,
    Pure,
}

/// What a subcommand needs besides the elaborated file.
pub struct Job<'a> {
    pub file_name: String,
    pub max_degree: usize,
    pub timings: bool,
    pub command: &'a crate::Command,
}

struct Clock {
    on: bool,
    start: Instant,
    laps: Vec<(String, u64)>,
}

impl Clock {
    fn new(on: bool) -> Self {
        Clock { on, start: Instant::now(), laps: Vec::new() }
    }

    fn lap(&mut self, name: &str) {
        let now = Instant::now();
        self.laps.push((name.into(), (now - self.start).as_micros() as u64));
        self.start = now;
    }

    fn finish(self, report: &mut Report) {
        if self.on {
            report.timings = Some(self.laps.into_iter().collect());
        }
    }
}

fn context<'e, F: Field>(env: &'e Environment<F>, name: &str) -> Result<&'e ContextValue<F>, CliError> {
    match env.get(name) {
        Some(Value::Context(c)) => Ok(c),
        Some(_) => Err(usage(format!("`{name}` is not a context"))),
        None => Err(usage(format!("no context named `{name}`"))),
    }
}

fn context_input<F: Field>(report: &mut Report, name: &str, c: &ContextValue<F>) {
    let ctx = &c.context;
    report.input(
        name,
        &format!("context/{}", c.kind.name()),
        &[("R", ctx.r().dim()), ("S", ctx.s().dim()), ("T", ctx.t().dim()), ("M", ctx.bimodule.dim())],
    );
}

fn module_input<F: Field>(report: &mut Report, name: &str, m: &Module<F>) {
    let kind = match m.side() {
        Side::Right => "right-module",
        Side::Left => "left-module",
    };
    report.input(name, kind, &[("dim", m.dim()), ("algebra", m.algebra().dim())]);
}

pub fn run<F: Field>(env: &Environment<F>, job: &Job) -> Result<Report, CliError> {
    let field = env.field.spec().to_string();
    use crate::Command::*;
    let mut report = match job.command {
        Check { context: name, .. } => check(env, name, field, job)?,
        Nct { context: name, oracle, emit_algebra, .. } => nct(env, name, *oracle, emit_algebra.as_deref(), field, job)?,
        Tor { right, left, .. } => tor_cmd(env, right, left, field, job)?,
        Theorem1 { context: name, .. } => theorem1(env, name, field, job)?,
        Pd { target, .. } => pd(env, target, field, job)?,
        Rigid { name, .. } => rigid(env, name, field, job)?,
    };
    report.inputs.insert(0, crate::report::Input { name: job.file_name.clone(), kind: "file".into(), dims: Default::default() });
    Ok(report)
}

fn check<F: Field>(env: &Environment<F>, name: &str, field: String, job: &Job) -> Result<Report, CliError> {
    let mut clock = Clock::new(job.timings);
    let c = context(env, name)?;
    let ctx = &c.context;
    let mut report = Report::new("check", field);
    context_input(&mut report, name, c);
    let euler = ctx.euler_characteristic();
    report.check("exact", euler == 0, format!("dim R - dim S - dim T + dim M = {euler}"));
    report.check("hypergenerator", ctx.is_hypercyclic(), "M = Sm + mT");
    clock.lap("exactness");
    match is_exact_pair(ctx) {
        Ok(v) => {
            report.query(
                "exact_pair",
                v.gamma_bijective,
                format!("dim S (x)_R T = {}, dim M = {}", v.tensor_dim, ctx.bimodule.dim()),
            );
            report.check(
                "exact_pair_agreement",
                true,
                format!("gamma bijective = {}, dim Coker (x) Coker = {}", v.gamma_bijective, v.coker_tensor_dim),
            );
            report.check("ring_epi_implies_exact_pair", check_ring_epi_implies_exact_pair(ctx, &v), "");
            report.result("tensor_dim", v.tensor_dim);
            report.result("coker_tensor_dim", v.coker_tensor_dim);
        }
        Err(ContextError::InternalInconsistency(msg)) => {
            report.check("exact_pair_agreement", false, msg);
        }
        Err(e) => return Err(e.into()),
    }
    clock.lap("exact_pair");
    if let ContextKind::Extension(data) = &c.kind {
        let f = &data.quotient_presentation.projection;
        let r = is_rigid(&data.s_module, &data.quotient, f)?;
        report.query("rigid", r.holds, format!("dim Hom = {}, dim span = {}", r.hom_dim, r.span_dim));
    }
    clock.lap("rigidity");
    clock.finish(&mut report);
    Ok(report)
}

fn oracle_verdict<F: Field>(report: &mut Report, ring: &NcTensorRing<F>, c: &ContextValue<F>, oracle: Oracle) -> Result<(), CliError> {
    let mismatch = |what: &str| -> CliError {
        NcError::OracleMismatch(format!("the {what} oracle needs a {what} context, this one is `{}`", c.kind.name())).into()
    };
    let (source, phi) = match (oracle, &c.kind) {
        (Oracle::None, _) => return Ok(()),
        (Oracle::Morita, ContextKind::Morita(data)) => {
            let o = nc_tensor_morita_oracle(data)?;
            let phi = morita_identification(ring, data, &o)?;
            (o.algebra, phi)
        }
        (Oracle::Pure, ContextKind::Pure(data)) => {
            let o = nc_tensor_pure_oracle(data)?;
            let phi = pure_identification(ring, data, &o);
            (o.algebra, phi)
        }
        (Oracle::Morita, _) => return Err(mismatch("morita")),
        (Oracle::Pure, _) => return Err(mismatch("pure")),
    };
    let name = "oracle_structure_constants";
    match compare_structure(&source, &ring.algebra, &phi) {
        Ok(()) => report.check(name, true, "structure constants identical"),
        Err(e) => report.check(name, false, e.to_string()),
    };
    Ok(())
}

fn nct<F: Field>(
    env: &Environment<F>,
    name: &str,
    oracle: Oracle,
    emit: Option<&Path>,
    field: String,
    job: &Job,
) -> Result<Report, CliError> {
    let mut clock = Clock::new(job.timings);
    let c = context(env, name)?;
    let mut report = Report::new("nct", field);
    context_input(&mut report, name, c);
    let ring = build_nc_tensor(&c.context)?;
    clock.lap("build");
    report.result("dim", ring.dim());
    let ax = ring_axiom_suite(&ring);
    let detail = format!(
        "{} associativity and {} unit failures on basis triples, rho {}, phi {}, beta(m) = 1 (x) 1 {}, {} beta bimodule failures",
        ax.associativity_failures,
        ax.unit_failures,
        if ax.rho_morphism { "is a morphism" } else { "is not a morphism" },
        if ax.phi_morphism { "is a morphism" } else { "is not a morphism" },
        ax.beta_of_m_is_one,
        ax.beta_bimodule_failures + ax.delta_failures + ax.section_failures,
    );
    report.check("ring_axioms", ax.passed(), detail);
    clock.lap("axioms");
    oracle_verdict(&mut report, &ring, c, oracle)?;
    clock.lap("oracle");
    if let Some(path) = emit {
        let text = print_algebra(&format!("{name}_nct"), &ring.algebra);
        std::fs::write(path, text)
            .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    }
    clock.finish(&mut report);
    Ok(report)
}

fn tor_cmd<F: Field>(env: &Environment<F>, right: &str, left: &str, field: String, job: &Job) -> Result<Report, CliError> {
    let mut clock = Clock::new(job.timings);
    let t = resolve(env, right, Side::Right)?;
    let s = resolve(env, left, Side::Left)?;
    let mut report = Report::new("tor", field);
    module_input(&mut report, right, &t);
    module_input(&mut report, left, &s);
    let res = tor(&t, &s, job.max_degree)?;
    clock.lap("tor");
    report.result("dims", &res.dims);
    report.result("max_degree", job.max_degree);
    report.result("first_nonvanishing", res.first_nonvanishing());
    report.result("certified_length", res.certified_length);
    let detail = match res.first_nonvanishing() {
        Some(i) => format!("Tor_{i} has dimension {}", res.dims[i]),
        None => format!("Tor_i = 0 for 1 <= i <= {}", job.max_degree),
    };
    report.query("higher_tor_vanishes", res.higher_vanish(), detail);
    clock.finish(&mut report);
    Ok(report)
}

fn pd_status(p: ProjectiveDimension) -> (Status, String) {
    match p {
        ProjectiveDimension::Exactly(n) => (Status::Pass, format!("pd = {n}")),
        ProjectiveDimension::AtLeast(n) => (Status::Inconclusive, format!("pd >= {n}")),
    }
}

fn theorem1<F: Field>(env: &Environment<F>, name: &str, field: String, job: &Job) -> Result<Report, CliError> {
    let mut clock = Clock::new(job.timings);
    let c = context(env, name)?;
    let n = job.max_degree;
    let mut report = Report::new("theorem1", field);
    context_input(&mut report, name, c);
    let ring = build_nc_tensor(&c.context)?;
    let td = build_theta(&ring)?;
    clock.lap("build");
    report.result("max_degree", n);
    // independent suites, assembled in a fixed order afterwards
    let ((verdict, local), (pds, lambda)) = rayon::join(
        || (theorem1_criterion(&td, n), verify_localization_properties(&td)),
        || (pd_inequality_check(&td, n), is_homological_up_to(&c.context.lambda, n)),
    );
    clock.lap("suites");
    let v = verdict?;
    report.result("tor", &v.tor.dims);
    report.result("theta_tor", &v.theta_tor.dims);
    report.result("failing_degree", v.failing_degree);
    let detail = match v.failing_degree {
        Some(i) => format!("Tor_{i}^R(T, S) has dimension {}", v.tor.dims[i]),
        None => format!("Tor_i^R(T, S) = 0 for 1 <= i <= {n}"),
    };
    report.query("criterion", v.criterion_holds, detail);
    report.query(
        "theta_homological",
        v.theta_homological,
        format!("ring epi = {}, Tor^B(C, C) = {:?}", v.theta_ring_epi, v.theta_tor.dims),
    );
    report.check("criterion_agrees_with_theta", v.agreement, "");
    for check in local?.checks {
        report.check(&format!("localization/{}", check.name), check.passed, check.detail);
    }
    match pds {
        Ok(p) => {
            report.result("pd", serde_json::json!({ "_R S": p.pd_rs, "_B C": p.pd_bc, "T_R": p.pd_tr, "C_B": p.pd_cb }));
            for check in p.checks {
                report.check(&format!("pd/{}", check.name), check.passed, check.detail);
            }
        }
        Err(NcError::PreconditionFailed(msg)) => {
            report.verdict("pd", Kind::Check, Status::Inconclusive, format!("not applicable: {msg}"));
        }
        Err(NcError::Inconclusive(msg)) => {
            report.verdict("pd", Kind::Check, Status::Inconclusive, msg);
        }
        Err(e) => return Err(e.into()),
    }
    report.result("lambda_tor", &lambda.tor.dims);
    let detail = match lambda.failing_degree {
        Some(i) => format!("fails at degree {i}"),
        None if lambda.ring_epi.holds => format!("ring epi and Tor_i^R(S, S) = 0 for 1 <= i <= {n}"),
        None => "not a ring epimorphism".into(),
    };
    report.query("lambda_homological", lambda.holds_to_bound, detail);
    clock.lap("report");
    clock.finish(&mut report);
    Ok(report)
}

fn pd<F: Field>(env: &Environment<F>, target: &str, field: String, job: &Job) -> Result<Report, CliError> {
    let mut clock = Clock::new(job.timings);
    let n = job.max_degree;
    let mut report = Report::new("pd", field);
    report.result("max_degree", n);
    if let Some(Value::Context(c)) = env.get(target) {
        context_input(&mut report, target, c);
        let ring = build_nc_tensor(&c.context)?;
        let td = build_theta(&ring)?;
        match pd_inequality_check(&td, n) {
            Ok(p) => {
                report.result("pd", serde_json::json!({ "_R S": p.pd_rs, "_B C": p.pd_bc, "T_R": p.pd_tr, "C_B": p.pd_cb }));
                for check in p.checks {
                    report.check(&check.name.to_string(), check.passed, check.detail);
                }
            }
            Err(NcError::PreconditionFailed(msg) | NcError::Inconclusive(msg)) => {
                report.verdict("pd", Kind::Check, Status::Inconclusive, msg);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let m = resolve(env, target, Side::Right)?;
        module_input(&mut report, target, &m);
        let p = projective_dimension(&m, n)?;
        let (status, detail) = pd_status(p);
        report.result("pd", p.value());
        report.verdict("finite_pd", Kind::Query, status, detail);
    }
    clock.lap("pd");
    clock.finish(&mut report);
    Ok(report)
}

/// For a morphism `λ: R → S`, the projection `S → S/λ(R)` of left
/// `R`-modules; for an element `x` of `A`, right multiplication by `x` on
/// `A` as a left module.
fn rigid<F: Field>(env: &Environment<F>, name: &str, field: String, job: &Job) -> Result<Report, CliError> {
    let mut clock = Clock::new(job.timings);
    let mut report = Report::new("rigid", field);
    let (y, x, f) = match env.get(name) {
        Some(Value::Morphism(lam)) => {
            let (_, s) = bimodule_sides(lam);
            let (q, pres) = s.quotient_module(&lam.matrix.row_vectors()).map_err(|e| CliError::Library(e.into()))?;
            (s, q, pres.projection)
        }
        Some(Value::Element { parent, coords }) => {
            let a = env.algebra(parent).expect("elaborated parent").clone();
            let m = Module::regular(a.clone(), Side::Left);
            (m.clone(), m, a.right_mult_matrix(coords))
        }
        Some(_) => return Err(usage(format!("`{name}` is neither a morphism nor an element"))),
        None => return Err(usage(format!("no declaration named `{name}`"))),
    };
    report.input(name, "map", &[("source", y.dim()), ("target", x.dim()), ("algebra", y.algebra().dim())]);
    let r = is_rigid(&y, &x, &f)?;
    clock.lap("rigidity");
    report.result("hom_dim", r.hom_dim);
    report.result("span_dim", r.span_dim);
    let v = report.query("rigid", r.holds, format!("dim Hom(Y, X) = {}, dim End(Y)f + f End(X) = {}", r.hom_dim, r.span_dim));
    if let Some(w) = &r.witness {
        v.witness = Some(matrix_json(w));
    }
    clock.finish(&mut report);
    Ok(report)
}
