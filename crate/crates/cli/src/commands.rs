use coapprox_core::coapprox::{
    bj_orthogonal, bj_orthogonal_lambda_oracle, eps_bj_orthogonal, eps_coapprox_defect, is_anti_coproximinal,
    is_best_coapprox, is_eps_best_coapprox, is_strongly_anti_coproximinal, min_along_line, solve_best_coapprox,
    AntiOptions, AntiVerdict, EpsilonValue, StrongVerdict, DEFAULT_BUDGET,
};
use coapprox_core::l1::{l1_best_coapprox, l1_is_anti_coproximinal, minimal_norming_set, norming_bound};
use coapprox_core::linalg::{rank, QMatrix, QVector};
use coapprox_core::linf::{component_table, linf_classify};
use coapprox_core::space::{PolyhedralSpace, SpaceKind};
use coapprox_core::subspace::{jy_set, smooth_dense_in, InducedBall, Subspace};
use coapprox_core::Error;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::request::{Command, Request};

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Invalid(String),
    /// Two engines disagreed; `response` is the output that would have been
    /// printed.
    Discrepancy { response: Value, issues: Vec<String> },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<Value, Failure>;

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("serializable")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

struct Context<'a> {
    req: &'a Request,
    space: PolyhedralSpace,
}

impl Context<'_> {
    fn points(&self, count: usize) -> Result<&[QVector], Failure> {
        let points = &self.req.points;
        if points.len() != count {
            return Err(Failure::Invalid(format!(
                "expected {count} point(s), got {}",
                points.len()
            )));
        }
        for p in points {
            self.space.check_dim(p)?;
        }
        Ok(points)
    }

    fn epsilon(&self) -> Result<&EpsilonValue, Failure> {
        self.req
            .epsilon
            .as_ref()
            .ok_or_else(|| Failure::Invalid("missing epsilon".into()))
    }

    fn basis(&self) -> Result<&QMatrix, Failure> {
        let basis = &self
            .req
            .subspace
            .as_ref()
            .ok_or_else(|| Failure::Invalid("missing subspace basis".into()))?
            .basis;
        if basis.ncols() != self.space.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: basis.ncols(),
            }
            .into());
        }
        Ok(basis)
    }

    fn induced(&self) -> Result<InducedBall, Failure> {
        let subspace = Subspace::new(self.basis()?.clone())?;
        Ok(InducedBall::new(&self.space, subspace)?)
    }

    /// `x` and `y0`, the latter from `y0` or a second point.
    fn x_and_y0(&self) -> Result<(QVector, QVector), Failure> {
        let points = &self.req.points;
        let (x, y0) = match (points.len(), &self.req.y0) {
            (1, Some(y0)) => (points[0].clone(), y0.clone()),
            (2, None) => (points[0].clone(), points[1].clone()),
            _ => return Err(Failure::Invalid("expected one point and y0".into())),
        };
        self.space.check_dim(&x)?;
        self.space.check_dim(&y0)?;
        Ok((x, y0))
    }

    fn budget(&self) -> u64 {
        self.req.budget.unwrap_or(DEFAULT_BUDGET)
    }

    fn anti_options(&self) -> AntiOptions {
        AntiOptions {
            seed: self.req.seed.unwrap_or(0),
            budget: self.budget(),
            ..AntiOptions::default()
        }
    }

    fn require_kind(&self, kind: SpaceKind, what: &str) -> Result<(), Failure> {
        if self.space.kind() == kind {
            Ok(())
        } else {
            Err(Failure::Invalid(format!("{what} needs a space of type {kind:?}").to_lowercase()))
        }
    }
}

pub fn run(req: &Request) -> Outcome {
    let command = req.command.expect("command resolved while parsing");
    let ctx = Context {
        req,
        space: req.space.build()?,
    };
    let body = match command {
        Command::Norm => norm(&ctx),
        Command::Jset => jset(&ctx),
        Command::Smooth => smooth(&ctx),
        Command::Bj => bj(&ctx),
        Command::EpsBj => eps_bj(&ctx),
        Command::BestCoapprox => best_coapprox(&ctx),
        Command::EpsCheck => eps_check(&ctx),
        Command::Defect => defect(&ctx),
        Command::Classify => classify(&ctx),
        Command::StarProperty => star(&ctx),
        Command::NormingSet => norming(&ctx),
        Command::Facets => facets(&ctx),
        Command::Jy => jy(&ctx),
    };
    let tag = |mut v: Value| {
        if let Value::Object(map) = &mut v {
            map.insert("command".into(), json!(command.name()));
        }
        v
    };
    match body {
        Ok(v) => Ok(tag(v)),
        Err(Failure::Discrepancy { response, issues }) => Err(Failure::Discrepancy {
            response: tag(response),
            issues,
        }),
        Err(e) => Err(e),
    }
}

fn check(verify: bool, response: Value, issues: Vec<String>) -> Outcome {
    if verify && !issues.is_empty() {
        Err(Failure::Discrepancy { response, issues })
    } else {
        Ok(response)
    }
}

fn norm(ctx: &Context) -> Outcome {
    let x = &ctx.points(1)?[0];
    Ok(json!({ "norm": ctx.space.norm(x) }))
}

fn jset(ctx: &Context) -> Outcome {
    let x = &ctx.points(1)?[0];
    let j = ctx.space.support_set(x)?;
    let functionals: Vec<&QVector> = j.indices.iter().map(|&i| ctx.space.functional(i)).collect();
    Ok(json!({ "indices": j.indices, "functionals": functionals }))
}

fn smooth(ctx: &Context) -> Outcome {
    let x = &ctx.points(1)?[0];
    let j = ctx.space.support_set(x)?;
    Ok(json!({ "smooth": j.len() == 1, "support_size": j.len() }))
}

fn bj(ctx: &Context) -> Outcome {
    let p = ctx.points(2)?;
    let orthogonal = bj_orthogonal(&ctx.space, &p[0], &p[1])?;
    let mut out = json!({ "orthogonal": orthogonal });
    if !ctx.req.verify {
        return Ok(out);
    }
    let oracle = bj_orthogonal_lambda_oracle(&ctx.space, &p[0], &p[1])?;
    let (value, lambda) = min_along_line(&ctx.space, &p[0], &p[1]);
    out["verify"] = json!({ "line_minimum": value, "lambda": lambda, "orthogonal": oracle });
    let issues = if oracle == orthogonal {
        Vec::new()
    } else {
        vec![format!("support functionals say {orthogonal}, line minimization says {oracle}")]
    };
    check(true, out, issues)
}

fn eps_bj(ctx: &Context) -> Outcome {
    let p = ctx.points(2)?;
    let eps = ctx.epsilon()?;
    let orthogonal = eps_bj_orthogonal(&ctx.space, &p[0], &p[1], eps)?;
    Ok(json!({ "orthogonal": orthogonal, "epsilon": eps }))
}

fn best_coapprox(ctx: &Context) -> Outcome {
    let x = &ctx.points(1)?[0];
    let yb = ctx.induced()?;
    let fast = if ctx.space.kind() == SpaceKind::L1 {
        match l1_best_coapprox(yb.subspace().basis(), x) {
            Ok(r) => Some(r),
            Err(Error::NonEmptyZeroSet(_)) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let Some(fast) = fast else {
        let result = solve_best_coapprox(&ctx.space, &yb, x, ctx.budget())?;
        return Ok(json!({ "engine": "generic", "result": result }));
    };
    let mut out = json!({ "engine": "l1-fast", "result": fast });
    if !ctx.req.verify {
        return Ok(out);
    }
    let generic = solve_best_coapprox(&ctx.space, &yb, x, ctx.budget())?;
    let mut issues = Vec::new();
    if generic.exists() != fast.exists() {
        issues.push(format!(
            "existence: l1-fast says {}, generic says {}",
            fast.exists(),
            generic.exists()
        ));
    }
    if let Some(y0) = fast.y0() {
        if !is_best_coapprox(&ctx.space, &yb, x, y0)? {
            issues.push(format!("{y0} fails the generic best-coapproximation check"));
        }
    }
    out["verify"] = json!({ "generic": generic });
    check(true, out, issues)
}

fn eps_check(ctx: &Context) -> Outcome {
    let (x, y0) = ctx.x_and_y0()?;
    let eps = ctx.epsilon()?;
    let yb = ctx.induced()?;
    let holds = is_eps_best_coapprox(&ctx.space, &yb, &x, &y0, eps)?;
    let defect = if x == y0 {
        Value::Null
    } else {
        to_json(&eps_coapprox_defect(&ctx.space, &yb, &x, &y0)?)
    };
    Ok(json!({ "eps_best": holds, "epsilon": eps, "defect": defect }))
}

fn defect(ctx: &Context) -> Outcome {
    let (x, y0) = ctx.x_and_y0()?;
    let yb = ctx.induced()?;
    let defect = eps_coapprox_defect(&ctx.space, &yb, &x, &y0)?;
    Ok(json!({ "defect": defect, "best": defect.is_zero() }))
}

fn anti_label(v: &AntiVerdict) -> &'static str {
    match v {
        AntiVerdict::Yes { .. } => "yes",
        AntiVerdict::No { .. } => "no",
        AntiVerdict::Undecided { .. } => "undecided",
    }
}

struct Generic {
    anti: Option<AntiVerdict>,
    strong: StrongVerdict,
}

impl Generic {
    fn run(ctx: &Context, yb: &InducedBall) -> Result<Generic, Failure> {
        let strong = is_strongly_anti_coproximinal(&ctx.space, yb)?;
        // Strong anti-coproximinality already rules out best coapproximations.
        let anti = if strong.is_yes() {
            None
        } else {
            Some(is_anti_coproximinal(&ctx.space, yb, &ctx.anti_options())?)
        };
        Ok(Generic { anti, strong })
    }

    fn anti_label(&self) -> &'static str {
        self.anti.as_ref().map_or("yes", anti_label)
    }

    fn certificates(&self) -> Value {
        match &self.anti {
            Some(anti) => json!({ "anti": anti, "strong": self.strong }),
            None => json!({ "strong": self.strong }),
        }
    }

    /// Disagreements with a fast path's answers. An undecided generic answer
    /// contradicts nothing.
    fn compare(&self, anti: bool, strong: bool) -> Vec<String> {
        let mut issues = Vec::new();
        let generic_anti = self.anti_label();
        if generic_anti != "undecided" && generic_anti != yes_no(anti) {
            issues.push(format!("anti: fast path says {}, generic says {generic_anti}", yes_no(anti)));
        }
        if self.strong.is_yes() != strong {
            issues.push(format!(
                "strongly_anti: fast path says {}, generic says {}",
                yes_no(strong),
                yes_no(self.strong.is_yes())
            ));
        }
        issues
    }
}

/// A line `span{y}` always contains a best coapproximation: with `f ∈ J(y)`,
/// `y₀ = (f(x)/f(y)) y` satisfies `f(x − y₀) = 0`.
fn classify_line(ctx: &Context, yb: &InducedBall) -> Outcome {
    let y = yb.subspace().basis().row(0);
    let n = ctx.space.dim();
    let x = (0..n)
        .map(|i| QVector::unit(n, i))
        .find(|e| !yb.subspace().contains(e))
        .expect("a line is a proper subspace when n ≥ 2");
    let f = ctx.space.functional(ctx.space.support_set(y)?.indices[0]);
    let y0 = y.scale(&(f.dot(&x) / f.dot(y)));
    let mut out = json!({
        "anti": "no",
        "strongly_anti": "no",
        "engine": "generic",
        "certificates": { "anti": { "verdict": "no", "x": x, "y0": y0 } },
    });
    if !ctx.req.verify {
        return Ok(out);
    }
    let holds = is_best_coapprox(&ctx.space, yb, &x, &y0)?;
    out["verify"] = json!({ "best_coapprox": holds });
    let issues = if holds {
        Vec::new()
    } else {
        vec![format!("{y0} fails the generic best-coapproximation check")]
    };
    check(true, out, issues)
}

fn classify(ctx: &Context) -> Outcome {
    let yb = ctx.induced()?;
    if yb.subspace().dim() == 1 {
        return classify_line(ctx, &yb);
    }
    let basis = yb.subspace().basis();
    let (m, n) = (basis.nrows(), basis.ncols());
    let (anti, strong, engine, certificates) = match ctx.space.kind() {
        SpaceKind::Linf => {
            let verdict = linf_classify(basis)?;
            let yes = verdict.is_strongly_anti();
            (yes, yes, "linf-fast", to_json(&verdict))
        }
        SpaceKind::L1 => {
            let verdict = l1_is_anti_coproximinal(basis)?;
            let certificates = json!({ "anti": verdict, "norming_bound": norming_bound(n, m) });
            (verdict.is_yes(), false, "l1-fast", certificates)
        }
        SpaceKind::Custom => {
            let generic = Generic::run(ctx, &yb)?;
            return Ok(json!({
                "anti": generic.anti_label(),
                "strongly_anti": yes_no(generic.strong.is_yes()),
                "engine": "generic",
                "certificates": generic.certificates(),
            }));
        }
    };
    let mut out = json!({
        "anti": yes_no(anti),
        "strongly_anti": yes_no(strong),
        "engine": engine,
        "certificates": certificates,
    });
    if !ctx.req.verify {
        return Ok(out);
    }
    let generic = Generic::run(ctx, &yb)?;
    let issues = generic.compare(anti, strong);
    out["verify"] = json!({
        "anti": generic.anti_label(),
        "strongly_anti": yes_no(generic.strong.is_yes()),
        "certificates": generic.certificates(),
    });
    check(true, out, issues)
}

fn star(ctx: &Context) -> Outcome {
    ctx.require_kind(SpaceKind::Linf, "star-property")?;
    let table = component_table(ctx.basis()?)?;
    let entry = |i: usize| {
        json!({
            "index": i,
            "component": table.components[i],
            "associated": table.associated(i),
            "star": table.star_property(i),
        })
    };
    match ctx.req.index {
        Some(i) if i >= table.len() => Err(Error::IndexOutOfRange {
            index: i,
            len: table.len(),
        }
        .into()),
        Some(i) => Ok(entry(i)),
        None => Ok(json!({ "components": (0..table.len()).map(entry).collect::<Vec<_>>() })),
    }
}

fn norming(ctx: &Context) -> Outcome {
    ctx.require_kind(SpaceKind::L1, "norming-set")?;
    let basis = ctx.basis()?;
    let set = minimal_norming_set(basis)?;
    Ok(json!({
        "size": set.len(),
        "bound": norming_bound(basis.ncols(), basis.nrows()),
        "elements": set.elements(),
        "representatives": set.representatives,
        "witnesses": set.witnesses,
    }))
}

fn facets(ctx: &Context) -> Outcome {
    let space = &ctx.space;
    let mut out = Map::new();
    out.insert("dim".into(), json!(space.dim()));
    out.insert("vertices".into(), to_json(&space.vertices()));
    out.insert("facets".into(), to_json(&space.dual_extreme()));
    if ctx.req.subspace.is_some() {
        let yb = ctx.induced()?;
        let induced: Vec<Value> = yb
            .facets()
            .map(|f| json!({ "dual_face": f.dual_face, "point": f.point }))
            .collect();
        out.insert("subspace_facets".into(), Value::Array(induced));
    }
    Ok(Value::Object(out))
}

fn jy(ctx: &Context) -> Outcome {
    let yb = ctx.induced()?;
    let set = jy_set(&ctx.space, &yb);
    let rows: Vec<QVector> = set
        .indices()
        .iter()
        .map(|&i| ctx.space.functional(i).clone())
        .collect();
    let r = rank(&QMatrix::from_rows(rows, ctx.space.dim()));
    Ok(json!({
        "indices": set.indices(),
        "members": set.members,
        "rank": r,
        "smooth_dense": smooth_dense_in(&yb),
    }))
}
