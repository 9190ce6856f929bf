use std::io::Write;
use std::time::Duration;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use vkampen::deleted_product::{evaluate_on_cycle, z_j_on_vertices, FingerMoveSpan, SkewCochain};
use vkampen::forms::{FormSpec, IntersectionForm};
use vkampen::geometry::{reduce_ring, vk_representative_with_retry};
use vkampen::kuhnel::{bounds_report, encode_conditions, max_admissible_n, BoundsReport, MaxN};
use vkampen::quadratic::{
    box_search_z, build_system, decode_model, emit_dimacs_xor, parse_model, solve_linear_z, solve_z2, QuadraticSystem,
    SolveOptions, SolveReport, Status, VarMap, WitnessFile,
};
use vkampen::sat::{Budget, SolverStats};
use vkampen::simplicial::{combinations, SimplicialComplex};
use vkampen::{Coefficient, Error, Integer, Ring, Z2};

use crate::{BoundsArgs, EmitCnfArgs, KuhnelArgs, ObstructArgs, SolveArgs, UsageError};

fn emit<T: Serialize>(out: &mut dyn Write, json: bool, report: &T, text: impl FnOnce(&T) -> String) -> anyhow::Result<()> {
    if json {
        serde_json::to_writer_pretty(&mut *out, report)?;
        writeln!(out)?;
    } else {
        write!(out, "{}", text(report))?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSummary {
    pub source: String,
    pub n_vertices: u32,
    pub k: usize,
    pub k_simplices: usize,
    pub disjoint_pairs: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassStatus {
    Trivial,
    Nontrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZjValue {
    pub vertices: Vec<u32>,
    pub value: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructReport {
    pub complex: ComplexSummary,
    pub ring: Ring,
    pub seed: u64,
    /// Moment-curve parameters of the vertices.
    pub placement: Vec<String>,
    pub finger_moves: usize,
    /// Number of unordered pairs where ϑ is nonzero.
    pub theta_support: usize,
    pub class: ClassStatus,
    /// Finger-move coefficients summing to ϑ when the class is trivial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_witness: Option<Vec<i64>>,
    /// Mod-2 values on `z_J` for every full `(2k+3)`-vertex subcomplex.
    pub z_j: Vec<ZjValue>,
}

fn membership<R: vkampen::deleted_product::SpanRing>(
    complex: &SimplicialComplex,
    theta: &SkewCochain<R>,
) -> anyhow::Result<(usize, Option<Vec<i64>>)>
where
    R::Solver: std::fmt::Debug,
{
    let span = FingerMoveSpan::<R>::new(complex, theta.k())?;
    let x = span.membership(theta)?;
    if let Some(x) = &x {
        anyhow::ensure!(span.basis().expand(x)? == *theta, "F-witness does not reproduce ϑ");
    }
    let x = x
        .map(|x| {
            x.iter()
                .map(|v| v.to_i64().ok_or_else(|| anyhow::anyhow!("coefficient {v} overflows i64")))
                .collect::<anyhow::Result<Vec<_>>>()
        })
        .transpose()?;
    Ok((span.basis().cols(), x))
}

pub fn obstruct_report(args: &ObstructArgs) -> anyhow::Result<ObstructReport> {
    let (complex, k) = args.complex.load()?;
    let (placement, theta) = vk_representative_with_retry(&complex, k, args.seed)?;
    let theta2 = reduce_ring(&theta);
    let (finger_moves, f_witness) = match args.ring {
        Ring::Integers => membership(&complex, &theta)?,
        Ring::Z2 => membership(&complex, &theta2)?,
    };
    let mut z_j = Vec::new();
    for j in combinations(complex.n_vertices(), 2 * k + 3) {
        match z_j_on_vertices(&complex, k, &j) {
            Ok(z) => z_j.push(ZjValue {
                value: evaluate_on_cycle(&theta2, &z)?.bit() as u8,
                vertices: j,
            }),
            Err(Error::NotFullSkeleton { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(ObstructReport {
        complex: ComplexSummary {
            source: args.complex.to_string(),
            n_vertices: complex.n_vertices(),
            k,
            k_simplices: complex.count(k),
            disjoint_pairs: vkampen::deleted_product::deleted_product_pairs(&complex, k).len(),
        },
        ring: args.ring,
        seed: args.seed,
        placement: placement.parameters().iter().map(|t| t.to_string()).collect(),
        finger_moves,
        theta_support: theta.support().count(),
        class: if f_witness.is_some() {
            ClassStatus::Trivial
        } else {
            ClassStatus::Nontrivial
        },
        f_witness,
        z_j,
    })
}

fn complex_line(c: &ComplexSummary) -> String {
    format!(
        "complex {}: {} vertices, k={}, {} k-simplices, {} disjoint pairs\n",
        c.source, c.n_vertices, c.k, c.k_simplices, c.disjoint_pairs
    )
}

pub fn obstruct(args: &ObstructArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let report = obstruct_report(args)?;
    emit(out, args.json, &report, |r| {
        let mut s = complex_line(&r.complex);
        s += &format!("placement t = {}\n", r.placement.join(" "));
        s += &format!(
            "ring {}: ϑ nonzero on {} pairs, {} finger moves\n",
            r.ring, r.theta_support, r.finger_moves
        );
        s += &format!(
            "class: {}\n",
            match r.class {
                ClassStatus::Trivial => "trivial (ϑ lies in F; witness verified)",
                ClassStatus::Nontrivial => "nontrivial",
            }
        );
        let ones = r.z_j.iter().filter(|z| z.value == 1).count();
        s += &format!("z_J: {} of {} full subcomplexes evaluate to 1\n", ones, r.z_j.len());
        for z in r.z_j.iter().take(20) {
            s += &format!("  J = {:?}: {}\n", z.vertices, z.value);
        }
        if r.z_j.len() > 20 {
            s += "  ...\n";
        }
        s
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOutput {
    pub complex: ComplexSummary,
    pub form: String,
    pub ring: Ring,
    #[serde(flatten)]
    pub report: SolveReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessCheckReport {
    pub complex: ComplexSummary,
    pub form: String,
    pub ring: Ring,
    pub valid: bool,
    /// Failing equations as `[σ, τ]` vertex lists.
    pub violated: Vec<[Vec<u32>; 2]>,
}

fn system<R: Coefficient>(
    complex: &SimplicialComplex,
    k: usize,
    form: &FormSpec,
    seed: u64,
    reduce: impl Fn(&SkewCochain<Integer>) -> SkewCochain<R>,
) -> anyhow::Result<QuadraticSystem<R>> {
    let form: IntersectionForm<R> = form.build(k)?;
    let (_, theta) = vk_representative_with_retry(complex, k, seed)?;
    Ok(build_system(complex, k, &form, &reduce(&theta))?)
}

fn check_file<R: Coefficient>(sys: &QuadraticSystem<R>, path: &std::path::Path) -> anyhow::Result<(bool, Vec<[Vec<u32>; 2]>)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: WitnessFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let check = sys.check_witness(&file.to_witness())?;
    let violated = check
        .violated
        .iter()
        .map(|&p| {
            let pair = sys.pairs().pair(p);
            [pair.first().vertices().to_vec(), pair.second().vertices().to_vec()]
        })
        .collect();
    Ok((check.is_valid(), violated))
}

pub enum SolveResult {
    Report(SolveOutput),
    Check(WitnessCheckReport),
}

pub fn solve_result(args: &SolveArgs) -> anyhow::Result<SolveResult> {
    let (complex, k) = args.complex.load()?;
    let summary = ComplexSummary {
        source: args.complex.to_string(),
        n_vertices: complex.n_vertices(),
        k,
        k_simplices: complex.count(k),
        disjoint_pairs: vkampen::deleted_product::deleted_product_pairs(&complex, k).len(),
    };
    let form = args.form.to_string();
    let checked = |(valid, violated)| {
        SolveResult::Check(WitnessCheckReport {
            complex: summary.clone(),
            form: form.clone(),
            ring: args.ring,
            valid,
            violated,
        })
    };
    let report = match args.ring {
        Ring::Z2 => {
            if args.box_bound.is_some() {
                return Err(UsageError("--box-bound applies to --ring Z only".into()).into());
            }
            let sys = system(&complex, k, &args.form, args.seed, reduce_ring)?;
            if let Some(path) = &args.check_witness {
                return Ok(checked(check_file(&sys, path)?));
            }
            let options = SolveOptions {
                budget: args.budget.budget(),
                threads: args.threads,
                ..SolveOptions::default()
            };
            solve_z2(&sys, &options)?
        }
        Ring::Integers => {
            let sys = system(&complex, k, &args.form, args.seed, |t| t.clone())?;
            if let Some(path) = &args.check_witness {
                return Ok(checked(check_file(&sys, path)?));
            }
            let linear = sys.form().matrix().iter().flatten().all(|v| v.to_i64() == Some(0));
            match args.box_bound {
                _ if linear => solve_linear_z(&sys)?,
                Some(bound) => box_search_z(&sys, bound, &args.budget.budget())?,
                None => {
                    return Err(UsageError(
                        "over Z with a nonzero form the system is not decided in general; \
                         pass --check-witness PATH or --box-bound B"
                            .into(),
                    )
                    .into())
                }
            }
        }
    };
    Ok(SolveResult::Report(SolveOutput {
        complex: summary,
        form,
        ring: args.ring,
        report,
    }))
}

pub fn solve(args: &SolveArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    match solve_result(args)? {
        SolveResult::Report(r) => emit(out, args.json, &r, |r| {
            let st = &r.report.stats;
            let mut s = complex_line(&r.complex);
            s += &format!("form {} over {}\n", r.form, r.ring);
            s += &format!(
                "{} equations, {} x unknowns, {} y unknowns ({} free)\n",
                st.equations, st.x_vars, st.y_vars, st.free_y_vars
            );
            if let Some(strategy) = st.strategy {
                s += &format!(
                    "strategy {}: {} branches, {} conflicts, {} ms\n",
                    serde_json::to_value(strategy).unwrap().as_str().unwrap_or("?"),
                    st.branches,
                    st.conflicts,
                    st.elapsed_ms
                );
            }
            s += &format!("status: {}\n", r.report.status);
            s
        }),
        SolveResult::Check(r) => emit(out, args.json, &r, |r| {
            let mut s = complex_line(&r.complex);
            s += &format!("form {} over {}\n", r.form, r.ring);
            if r.valid {
                s += "witness: valid\n";
            } else {
                s += &format!("witness: invalid, {} equations fail\n", r.violated.len());
                for [a, b] in r.violated.iter().take(20) {
                    s += &format!("  {a:?} x {b:?}\n");
                }
            }
            s
        }),
    }
}

/// One line of the table: both form types for a given β.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KuhnelRow {
    pub k: usize,
    pub beta: usize,
    pub identity: Option<MaxN>,
    /// Only for even β.
    pub symplectic: Option<MaxN>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KuhnelSingle {
    pub k: usize,
    pub n: u32,
    pub form: String,
    pub status: Status,
    pub condition_i: usize,
    pub condition_ii: usize,
    pub free_bits: usize,
    pub elapsed_ms: u64,
    pub stats: SolverStats,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KuhnelOutput {
    Single(KuhnelSingle),
    Search { form: String, result: MaxN },
    Table { rows: Vec<KuhnelRow> },
}

pub fn cell(m: &Option<MaxN>) -> String {
    match m {
        None => "-".into(),
        Some(m) if m.is_exact() => m.lower.to_string(),
        Some(m) => format!("{}≤n≤{} (unknown-above)", m.lower, m.upper),
    }
}

/// Per-probe budget; ten minutes unless one is given.
fn kuhnel_budget(args: &KuhnelArgs) -> Budget {
    let mut budget = args.budget.budget();
    if budget.time.is_none() && budget.branches.is_none() {
        budget.time = Some(Duration::from_secs(600));
    }
    budget
}

pub fn kuhnel_output(args: &KuhnelArgs) -> anyhow::Result<KuhnelOutput> {
    if args.k == 0 {
        return Err(UsageError("--k must be positive".into()).into());
    }
    if args.k >= 3 && !args.extended {
        return Err(UsageError(format!("k={} rows are expensive; rerun with --extended", args.k)).into());
    }
    let budget = kuhnel_budget(args);
    let cap = args.n_cap.unwrap_or(u32::MAX);
    if let Some(spec) = &args.form {
        let form: IntersectionForm<Z2> = spec.build(args.k)?;
        if let Some(n) = args.n {
            let inst = encode_conditions(args.k, n, &form)?;
            if let Some(path) = &args.emit_cnf {
                std::fs::write(path, inst.to_dimacs()).with_context(|| format!("writing {}", path.display()))?;
            }
            let sol = inst.solve(&budget)?;
            return Ok(KuhnelOutput::Single(KuhnelSingle {
                k: args.k,
                n,
                form: spec.to_string(),
                status: sol.status,
                condition_i: inst.condition_i_count(),
                condition_ii: inst.condition_ii_count(),
                free_bits: inst.free_bits(),
                elapsed_ms: sol.elapsed_ms,
                stats: sol.stats,
            }));
        }
        let result = max_admissible_n(args.k, &form, cap, &budget)?;
        return Ok(KuhnelOutput::Search {
            form: spec.to_string(),
            result,
        });
    }
    let Some((lo, hi)) = args.beta else {
        return Err(UsageError("pass --form F or --beta B (or a range a..b)".into()).into());
    };
    if args.n.is_some() {
        return Err(UsageError("--n needs --form".into()).into());
    }
    let mut rows = Vec::new();
    for beta in lo.max(1)..=hi {
        let identity = IntersectionForm::<Z2>::identity(args.k, beta)?;
        let symplectic = (beta % 2 == 0).then(|| IntersectionForm::<Z2>::symplectic(args.k, beta / 2));
        rows.push(KuhnelRow {
            k: args.k,
            beta,
            identity: Some(max_admissible_n(args.k, &identity, cap, &budget)?),
            symplectic: symplectic
                .map(|f| max_admissible_n(args.k, &f, cap, &budget))
                .transpose()?,
        });
    }
    Ok(KuhnelOutput::Table { rows })
}

pub fn kuhnel(args: &KuhnelArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let output = kuhnel_output(args)?;
    emit(out, args.json, &output, |o| match o {
        KuhnelOutput::Single(s) => format!(
            "k={} n={} form {}: {} ({} disjoint-pair and {} J constraints, {} free bits, {} ms)\n",
            s.k, s.n, s.form, s.status, s.condition_i, s.condition_ii, s.free_bits, s.elapsed_ms
        ),
        KuhnelOutput::Search { form, result } => {
            let mut s = format!(" k | β | form | max n\n");
            s += &format!(
                " {} | {} | {} | {}\n",
                result.k,
                result.beta,
                form,
                cell(&Some(result.clone()))
            );
            for p in &result.probes {
                s += &format!("   n={}: {} ({} ms)\n", p.n, p.status, p.elapsed_ms);
            }
            s
        }
        KuhnelOutput::Table { rows } => {
            let mut s = String::from(" k | β | max n, Ω~I | max n, Ω symplectic\n");
            for r in rows {
                s += &format!(" {} | {} | {} | {}\n", r.k, r.beta, cell(&r.identity), cell(&r.symplectic));
            }
            s
        }
    })
}

pub fn bounds_reports(args: &BoundsArgs) -> Vec<BoundsReport> {
    (args.beta.0..=args.beta.1)
        .map(|beta| bounds_report(args.k, beta as u64, args.alternating, args.chi))
        .collect()
}

pub fn bounds(args: &BoundsArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let reports = bounds_reports(args);
    emit(out, args.json, &reports, |rs| {
        let mut s = String::from(" k | β | alternating | χ | closed form | radon | conjecture rhs | conjecture max n\n");
        for r in rs {
            s += &format!(
                " {} | {} | {} | {} | {} | {} | {} | {}\n",
                r.k,
                r.beta,
                r.alternating,
                r.chi,
                r.closed_form,
                r.radon,
                r.conjecture_rhs,
                r.conjecture_max_n.map_or("-".into(), |n| n.to_string())
            );
        }
        s
    })
}

pub fn emit_cnf(args: &EmitCnfArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let (complex, k) = args.complex.load()?;
    let sys = system(&complex, k, &args.form, args.seed, reduce_ring)?;
    let export = emit_dimacs_xor(&sys);
    std::fs::write(&args.output, &export.text).with_context(|| format!("writing {}", args.output.display()))?;
    let map_json = serde_json::to_string_pretty(&export.var_map)?;
    if let Some(path) = &args.map {
        std::fs::write(path, &map_json).with_context(|| format!("writing {}", path.display()))?;
    }
    match &args.decode {
        None => writeln!(out, "{map_json}")?,
        Some(model_path) => {
            let text =
                std::fs::read_to_string(model_path).with_context(|| format!("reading {}", model_path.display()))?;
            let var_map: &VarMap = &export.var_map;
            let model = parse_model(&text, var_map.num_vars)?;
            let witness = decode_model(&sys, var_map, &model)?;
            let check = sys.check_witness(&witness)?;
            if !check.is_valid() {
                bail!("decoded model violates {} equations", check.violated.len());
            }
            serde_json::to_writer_pretty(&mut *out, &witness.to_file()?)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
