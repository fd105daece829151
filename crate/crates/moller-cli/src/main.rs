//! Command-line surface: load a model file, run the verification pipelines,
//! and emit a report in text or machine form.
//!
//! Exit codes: 0 success, 2 parse/schema error, 3 model-invariant failure,
//! 4 internal inconsistency between the two existence routes.

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use moller_core::ce::{build_ce, ce_cohomology, mc_check, CEAlgebra, CEError};
use moller_core::hpt::{nonexistence_certificate, TransferVerdict};
use moller_core::linfty::{check_jacobi, LInftyStructure};
use moller_core::moller::{
    moller_from_splitting, obstruction_tower, splitting_from_differential, verify_moller,
    MollerError, ObstructionReport,
};

use moller_cli::model::{load_model, BuiltModel, ModelFile};
use moller_cli::report::{CertificateOut, CohTable, GeneratorImage, Report, Verdict, WitnessOut};

#[derive(Parser)]
#[command(name = "moller", version, about = "Existence and obstruction analysis of formal intertwiners for finite models")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    General,
    Algebra,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Route {
    Tower,
    Hpt,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Emit {
    Text,
    Machine,
}

#[derive(clap::Args)]
struct Common {
    /// Model file (JSON)
    model: String,
    /// Weight window; defaults to the model file's truncation, then 4
    #[arg(long)]
    weight: Option<usize>,
    /// Formal order; defaults to the model file's truncation, then 3
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value = "algebra")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "both")]
    route: Route,
    #[arg(long, value_enum, default_value = "text")]
    emit: Emit,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run all invariant checks and both existence routes
    Check(Common),
    /// Per-weight dimensions of perturbed vs free observable cohomology
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        degree: i64,
    },
    /// Homotopy Jacobi identity, arity by arity
    Jacobi(Common),
    /// Expanded Maurer-Cartan identity, order by order
    Mc(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Cmd::Check(c) => cmd_check(c),
        Cmd::Cohomology { common, degree } => cmd_cohomology(common, *degree),
        Cmd::Jacobi(c) => cmd_jacobi(c),
        Cmd::Mc(c) => cmd_mc(c),
    };
    ExitCode::from(code)
}

fn truncation(file: &ModelFile, c: &Common) -> (usize, usize) {
    let w = c
        .weight
        .or(file.truncation.map(|t| t.weight))
        .unwrap_or(4);
    let l = c.order.or(file.truncation.map(|t| t.order)).unwrap_or(3);
    (w, l)
}

fn load(c: &Common) -> Result<(ModelFile, BuiltModel), u8> {
    load_model(&c.model).map_err(|e| {
        eprintln!("{e}");
        e.exit_code() as u8
    })
}

fn finish(rep: &mut Report, started: Instant, emit: Emit) {
    rep.timing_ms = Some(started.elapsed().as_millis() as u64);
    match emit {
        Emit::Text => print!("{}", rep.render_text()),
        Emit::Machine => println!("{}", rep.to_machine()),
    }
}

fn jacobi_arity(s: &LInftyStructure) -> usize {
    // identities above 2A - 1 only involve absent brackets
    (2 * s.max_arity).saturating_sub(1).max(1)
}

/// Run the shared invariant gauntlet: complex, Jacobi, truncated observable
/// algebra, Maurer-Cartan. Returns the built algebra or the exit code.
fn gauntlet(
    built: &BuiltModel,
    w: usize,
    l: usize,
    rep: &mut Report,
) -> Result<CEAlgebra, u8> {
    let ok = built.structure.complex.verify();
    rep.push_check("differential squares to zero", ok, None);
    if !ok {
        return Err(3);
    }
    let jac = check_jacobi(&built.structure, jacobi_arity(&built.structure));
    rep.push_check(
        "homotopy Jacobi",
        jac.passed(),
        jac.first_failure()
            .map(|e| format!("arity {} fails on {:?}", e.arity, e.witness)),
    );
    if !jac.passed() {
        return Err(3);
    }
    let a = match build_ce(&built.structure, w, l) {
        Ok(a) => a,
        Err(CEError::JacobiFailed(r)) => {
            rep.push_check(
                "observable algebra construction",
                false,
                r.first_failure().map(|e| format!("arity {}", e.arity)),
            );
            return Err(3);
        }
        Err(CEError::MCFailed(_)) => unreachable!("construction does not run the MC check"),
    };
    let mc = mc_check(&a);
    rep.push_check(
        "Maurer-Cartan identity",
        mc.passed(),
        mc.first_failure().and_then(|o| {
            o.witness
                .as_ref()
                .map(|w| format!("order {}: {} -> {} ({})", o.order, w.mono, w.value, w.coefficient))
        }),
    );
    if !mc.passed() {
        return Err(3);
    }
    Ok(a)
}

fn cmd_check(c: &Common) -> u8 {
    let started = Instant::now();
    let (file, built) = match load(c) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let (w, l) = truncation(&file, c);
    let mut rep = Report::new(built.kind, w, l);
    let a = match gauntlet(&built, w, l, &mut rep) {
        Ok(a) => a,
        Err(code) => {
            finish(&mut rep, started, c.emit);
            return code;
        }
    };

    let mut tower: Option<ObstructionReport> = None;
    if c.route != Route::Hpt {
        match obstruction_tower(&a, l, w) {
            Ok(t) => {
                let detail = t
                    .obstructed_at
                    .map(|n| format!("obstructed at order {n}"))
                    .unwrap_or_else(|| format!("solved through order {l}"));
                rep.push_check("obstruction tower", true, Some(detail));
                tower = Some(t);
            }
            Err(MollerError::RetractUnavailable) => {
                rep.push_check("obstruction tower", false, Some("no retract lift".into()));
                finish(&mut rep, started, c.emit);
                return 3;
            }
            Err(e) => {
                rep.push_check("obstruction tower", false, Some(format!("{e:?}")));
                finish(&mut rep, started, c.emit);
                return 3;
            }
        }
    }

    let mut transfer: Option<TransferVerdict> = None;
    if c.route != Route::Tower {
        // the initial-data model runs the transfer on the raw sector through
        // its Hodge retract; every other model on its own complex
        let verdict = match &built.full {
            Some((ym, hodge)) => nonexistence_certificate(&ym.as_structure(), hodge),
            None => nonexistence_certificate(&built.structure, &built.retract),
        };
        match verdict {
            Ok(v) => {
                let detail = match &v {
                    TransferVerdict::NonExistence(wit) => {
                        rep.nonexistence_witness = Some(WitnessOut::from_core(wit));
                        format!("nonzero transferred bracket on ([{}], [{}])", wit.left, wit.right)
                    }
                    TransferVerdict::Inconclusive => "transferred bracket vanishes".into(),
                };
                rep.push_check("transferred-bracket criterion", true, Some(detail));
                transfer = Some(v);
            }
            Err(e) => {
                rep.push_check("transferred-bracket criterion", false, Some(format!("{e:?}")));
                finish(&mut rep, started, c.emit);
                return 3;
            }
        }
    }

    // closed-form intertwiner from a splitting, when the kinetic operator
    // admits one
    if built.splitting_available {
        match splitting_from_differential(&a).ok_or(MollerError::SplittingInvalid).and_then(|s| {
            let cand = moller_from_splitting(&a, &s)?;
            Ok(cand)
        }) {
            Ok(cand) => {
                let v = verify_moller(&a, &cand);
                rep.push_check("splitting intertwiner verifies", v.passed(), None);
                if !v.passed() {
                    finish(&mut rep, started, c.emit);
                    return 4;
                }
                rep.moller_generators = Some(generator_images(&a, &cand.gen_images));
            }
            Err(e) => {
                rep.push_check("splitting intertwiner", false, Some(format!("{e:?}")));
                finish(&mut rep, started, c.emit);
                return 3;
            }
        }
    }

    // reconcile routes
    let tower_obstructed = tower.as_ref().and_then(|t| t.obstructed_at);
    let hpt_nonexistence = matches!(transfer, Some(TransferVerdict::NonExistence(_)));
    if let Some(t) = &tower {
        if let Some(cert) = t.first_obstruction() {
            rep.obstruction = Some(CertificateOut::from_core(cert));
        }
    }
    if c.route == Route::Both {
        let consistent = !(hpt_nonexistence && tower_obstructed.is_none());
        rep.push_check("routes consistent", consistent, None);
        if !consistent {
            rep.verdict = Verdict::Inconclusive;
            finish(&mut rep, started, c.emit);
            return 4;
        }
    }
    rep.verdict = if hpt_nonexistence {
        Verdict::NonExistence
    } else if let Some(n) = tower_obstructed {
        Verdict::ObstructedAtOrder { order: n }
    } else if tower.is_some() {
        Verdict::ExistsUpTo { order: l, weight: w }
    } else {
        Verdict::Inconclusive
    };
    finish(&mut rep, started, c.emit);
    0
}

fn generator_images(
    a: &CEAlgebra,
    gen_images: &Option<Vec<Vec<moller_core::symalg::Elt>>>,
) -> Vec<GeneratorImage> {
    let Some(images) = gen_images else {
        return Vec::new();
    };
    images
        .iter()
        .enumerate()
        .map(|(g, orders)| GeneratorImage {
            generator: a.basis.gen_label(g).to_string(),
            orders: orders
                .iter()
                .map(|elt| {
                    elt.iter()
                        .map(|(m, c)| (a.basis.label_of(*m), c.to_string()))
                        .collect()
                })
                .collect(),
        })
        .collect()
}

fn cmd_cohomology(c: &Common, degree: i64) -> u8 {
    let started = Instant::now();
    let (file, built) = match load(c) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let (w, l) = truncation(&file, c);
    // the window must leave room for the weight-raising image block
    let w_build = w.max(1);
    let mut rep = Report::new(built.kind, w, l);
    let a = match gauntlet(&built, w_build + 1, l, &mut rep) {
        Ok(a) => a,
        Err(code) => {
            finish(&mut rep, started, c.emit);
            return code;
        }
    };
    let perturbed = match ce_cohomology(&a, degree, w) {
        Ok(r) => r,
        Err(CEError::MCFailed(_)) | Err(CEError::JacobiFailed(_)) => {
            finish(&mut rep, started, c.emit);
            return 3;
        }
    };
    // free column: same complex, brackets discarded
    let bare = LInftyStructure {
        complex: built.structure.complex.clone(),
        brackets: Default::default(),
        max_arity: 1,
    };
    let free_a = build_ce(&bare, w_build + 1, l).expect("bare structure always builds");
    let free = ce_cohomology(&free_a, degree, w).expect("bare structure passes MC");
    rep.cohomology = Some(CohTable {
        degree,
        filtered_only: perturbed.filtered_only,
        rows: perturbed
            .rows
            .iter()
            .zip(free.rows.iter())
            .map(|(p, f)| (p.weight, f.coh_dim, p.coh_dim))
            .collect(),
    });
    rep.verdict = Verdict::Inconclusive;
    finish(&mut rep, started, c.emit);
    0
}

fn cmd_jacobi(c: &Common) -> u8 {
    let started = Instant::now();
    let (file, built) = match load(c) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let (w, l) = truncation(&file, c);
    let mut rep = Report::new(built.kind, w, l);
    let ok = built.structure.complex.verify();
    rep.push_check("differential squares to zero", ok, None);
    let mut all_ok = ok;
    if ok {
        let jac = check_jacobi(&built.structure, jacobi_arity(&built.structure));
        for e in &jac.entries {
            rep.push_check(
                &format!("Jacobi identity, arity {}", e.arity),
                e.ok,
                e.witness.as_ref().map(|m| format!("fails on {m}")),
            );
        }
        all_ok = jac.passed();
    }
    rep.verdict = Verdict::Inconclusive;
    finish(&mut rep, started, c.emit);
    if all_ok {
        0
    } else {
        3
    }
}

fn cmd_mc(c: &Common) -> u8 {
    let started = Instant::now();
    let (file, built) = match load(c) {
        Ok(v) => v,
        Err(code) => return code,
    };
    let (w, l) = truncation(&file, c);
    let mut rep = Report::new(built.kind, w, l);
    if !built.structure.complex.verify() {
        rep.push_check("differential squares to zero", false, None);
        finish(&mut rep, started, c.emit);
        return 3;
    }
    let a = match build_ce(&built.structure, w, l) {
        Ok(a) => a,
        Err(CEError::JacobiFailed(r)) => {
            rep.push_check(
                "observable algebra construction",
                false,
                r.first_failure().map(|e| format!("Jacobi fails at arity {}", e.arity)),
            );
            finish(&mut rep, started, c.emit);
            return 3;
        }
        Err(CEError::MCFailed(_)) => unreachable!(),
    };
    let mc = mc_check(&a);
    for o in &mc.orders {
        rep.push_check(
            &format!("Maurer-Cartan identity, order {}", o.order),
            o.ok,
            o.witness
                .as_ref()
                .map(|w| format!("{} -> {} ({})", w.mono, w.value, w.coefficient)),
        );
    }
    rep.verdict = Verdict::Inconclusive;
    finish(&mut rep, started, c.emit);
    if mc.passed() {
        0
    } else {
        3
    }
}
