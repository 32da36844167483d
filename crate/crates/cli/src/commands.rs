use std::path::Path;

use birkhoff_core::asymptotics::{
    asymptotic_genus_experiment, deviation_non_increasing, estimate_helicity, seifert_fibonacci_family, ExperimentConfig,
};
use birkhoff_core::birkhoff::section_topology;
use birkhoff_core::flows::{fiber_curves, hopf_fiber_starts};
use birkhoff_core::framing::{self_linking, FramingField, RationalFraming};
use birkhoff_core::{linking_matrix, Ambient, CurveFile, FlowField, WeightedLink};
use num_rational::Ratio;
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::output::{Rendered, Table};
use crate::{CliError, Command, FieldArgs, FramingArgs, FramingChoice};

type Outcome = (Rendered, Result<(), CliError>);

pub fn execute(command: &Command, run: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Link { curves } => link(curves, run).map(|r| (r, Ok(()))),
        Command::Slk { curves, framing, field } => slk(curves, framing, field, run).map(|r| (r, Ok(()))),
        Command::Section {
            curves,
            mult,
            framing,
            field,
        } => section(curves, mult, framing, field, run).map(|r| (r, Ok(()))),
        Command::Helicity { field, t, pairs } => helicity(field, *t, *pairs, run).map(|r| (r, Ok(()))),
        Command::Asymptotic {
            family,
            depth,
            pairs,
            helicity_step,
        } => asymptotic(family, *depth, *pairs, *helicity_step, run).map(|r| (r, Ok(()))),
        Command::VerifyHopf { max_m, vertices } => verify_hopf(*max_m, *vertices, run),
    }
}

fn load(path: &Path, run: &RunConfig) -> Result<CurveFile, CliError> {
    CurveFile::read(path, &run.tolerances).map_err(|e| match e {
        birkhoff_core::Error::InvalidInput(msg) => CliError::Input(msg),
        other => CliError::Domain(other),
    })
}

fn field(args: &FieldArgs) -> Result<FlowField, CliError> {
    FlowField::from_selector(&args.field)
        .and_then(|f| f.scaled(args.scale))
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn ratio_value(r: &Ratio<i64>) -> Value {
    if r.is_integer() {
        json!(r.to_integer())
    } else {
        json!(r.to_string())
    }
}

fn link(path: &Path, run: &RunConfig) -> Result<Rendered, CliError> {
    let file = load(path, run)?;
    let m = file.curves.len();
    if m < 2 {
        return Err(CliError::Input("linking needs at least two curves".into()));
    }
    let curves: Vec<_> = file.curves.into_iter().map(|r| r.curve).collect();
    let link = WeightedLink::new(curves, vec![1; m], &run.tolerances)?;
    let lk = linking_matrix(&link, &run.tolerances)?;
    let cell = |i: usize, j: usize| lk.get(i, j).map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    let text = if m == 2 {
        format!("{}\n", lk.lk(0, 1))
    } else {
        (0..m)
            .map(|i| (0..m).map(|j| cell(i, j)).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    };
    let mut header = vec!["name"];
    header.extend(lk.names().iter().map(String::as_str));
    let mut table = Table::new(&header);
    for i in 0..m {
        let mut row = vec![lk.names()[i].clone()];
        row.extend((0..m).map(|j| cell(i, j)));
        table.push(row);
    }
    Ok(Rendered {
        json: json!({ "names": lk.names(), "lk": lk.entries() }),
        csv: Some(table),
        text: Some(text),
        preferred: Format::Json,
    })
}

fn framings(file: &CurveFile, args: &FramingArgs, field_args: &FieldArgs) -> Result<Vec<RationalFraming>, CliError> {
    file.curves
        .iter()
        .map(|rec| {
            let base = match args.framing {
                FramingChoice::Zeta => {
                    if file.ambient != Ambient::S3 {
                        return Err(CliError::Input("the zeta framing needs curves on S^3".into()));
                    }
                    let f = field(field_args)?;
                    let z = f
                        .transverse_fn()
                        .cloned()
                        .ok_or_else(|| CliError::Usage(format!("field {} has no transverse field", f.name())))?;
                    FramingField::AmbientField(z)
                }
                FramingChoice::Normals => match &rec.normals {
                    Some(n) => FramingField::ExplicitNormals(n.clone()),
                    None => {
                        return Err(CliError::Input(format!("curve {} has no normals", rec.curve.name())));
                    }
                },
            };
            RationalFraming::new(base, args.k_f).map_err(|e| CliError::Usage(e.to_string()))
        })
        .collect()
}

fn slk(path: &Path, args: &FramingArgs, field_args: &FieldArgs, run: &RunConfig) -> Result<Rendered, CliError> {
    let file = load(path, run)?;
    let framings = framings(&file, args, field_args)?;
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut table = Table::new(&["name", "slk", "linking", "k_f"]);
    for (i, (rec, f)) in file.curves.iter().zip(&framings).enumerate() {
        let s = self_linking(&rec.curve, f, &run.tolerances).map_err(|e| CliError::Domain(e_component(e, i)))?;
        entries.push(json!({
            "name": rec.curve.name(),
            "slk": ratio_value(&s.value),
            "linking": s.linking,
            "k_f": s.k_f,
        }));
        text.push_str(&format!("{} {}\n", rec.curve.name(), s.value));
        table.push(vec![
            rec.curve.name().to_string(),
            s.value.to_string(),
            s.linking.to_string(),
            s.k_f.to_string(),
        ]);
    }
    Ok(Rendered {
        json: Value::Array(entries),
        csv: Some(table),
        text: Some(text),
        preferred: Format::Json,
    })
}

fn e_component(e: birkhoff_core::Error, index: usize) -> birkhoff_core::Error {
    birkhoff_core::Error::Component {
        index,
        source: Box::new(e),
    }
}

fn section(
    path: &Path,
    mult: &[i64],
    args: &FramingArgs,
    field_args: &FieldArgs,
    run: &RunConfig,
) -> Result<Rendered, CliError> {
    let file = load(path, run)?;
    let m = file.curves.len();
    let mult = if mult.is_empty() { vec![1; m] } else { mult.to_vec() };
    if mult.len() != m {
        return Err(CliError::Usage(format!("{} multiplicities for {} curves", mult.len(), m)));
    }
    let framings = framings(&file, args, field_args)?;
    let curves = file.curves.into_iter().map(|r| r.curve).collect();
    let link = WeightedLink::new(curves, mult, &run.tolerances)?;
    let topo = section_topology(&link, &framings, &run.tolerances)?;
    let json = serde_json::to_value(&topo).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Rendered::json(json))
}

fn helicity(field_args: &FieldArgs, t: f64, pairs: usize, run: &RunConfig) -> Result<Rendered, CliError> {
    let f = field(field_args)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(CliError::Usage(format!("--T must be positive, got {t}")));
    }
    if pairs == 0 {
        return Err(CliError::Usage("--pairs must be at least 1".into()));
    }
    let est = estimate_helicity(&f, t, pairs, run.seed, &run.integrator, &run.tolerances)?;
    let json = serde_json::to_value(&est).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Rendered::json(json))
}

fn asymptotic(
    family: &str,
    depth: usize,
    pairs: Option<usize>,
    helicity_step: Option<f64>,
    run: &RunConfig,
) -> Result<Rendered, CliError> {
    if family != "seifert-fib" {
        return Err(CliError::Usage(format!("unknown family `{family}` (expected seifert-fib)")));
    }
    let defaults = ExperimentConfig::default();
    let cfg = ExperimentConfig {
        helicity_pairs: pairs.unwrap_or(defaults.helicity_pairs),
        helicity_step: helicity_step.unwrap_or(defaults.helicity_step),
        seed: run.seed,
        ..defaults
    };
    if cfg.helicity_pairs == 0 || !(cfg.helicity_step.is_finite() && cfg.helicity_step > 0.0) {
        return Err(CliError::Usage("--pairs and --helicity-step must be positive".into()));
    }
    let members = seifert_fibonacci_family(depth).map_err(|e| CliError::Usage(e.to_string()))?;
    let rows = asymptotic_genus_experiment(&members, &cfg, &run.integrator, &run.tolerances)?;
    let mut table = Table::new(&["p", "q", "t_n", "genus", "g_over_t2", "hel_ref", "rel_dev"]);
    for r in &rows {
        table.push(vec![
            r.p.to_string(),
            r.q.to_string(),
            r.t_n.to_string(),
            r.genus.to_string(),
            r.g_over_t2.to_string(),
            r.hel_ref.to_string(),
            r.rel_dev.to_string(),
        ]);
    }
    let json = json!({
        "family": family,
        "design": "fields X_{p,q}/sqrt(pq) over consecutive Fibonacci pairs; t_n = 2 pi sqrt(pq) is the period of the generic orbit; hel_ref is half the estimated helicity",
        "helicity_pairs": cfg.helicity_pairs,
        "helicity_step": cfg.helicity_step,
        "seed": cfg.seed,
        "rows": rows,
        "rel_dev_non_increasing": deviation_non_increasing(&rows),
    });
    Ok(Rendered {
        json,
        csv: Some(table),
        text: None,
        preferred: Format::Csv,
    })
}

fn verify_hopf(max_m: usize, vertices: usize, run: &RunConfig) -> Result<Outcome, CliError> {
    if max_m == 0 {
        return Err(CliError::Usage("--max-m must be at least 1".into()));
    }
    let hopf = FlowField::hopf();
    let zeta = RationalFraming::integral(FramingField::AmbientField(
        hopf.transverse_fn().cloned().expect("built-in field has a transverse field"),
    ));
    let mut table = Table::new(&["m", "chi", "genus", "expected_chi", "expected_genus", "ok"]);
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for m in 1..=max_m {
        let curves = fiber_curves(&hopf, &hopf_fiber_starts(m), vertices, &run.integrator, &run.tolerances)?;
        let link = WeightedLink::new(curves, vec![1; m], &run.tolerances)?;
        let topo = section_topology(&link, &vec![zeta.clone(); m], &run.tolerances)?;
        let mi = m as i64;
        let (chi, genus) = (-mi * (mi - 2), 1 + mi * (mi - 3) / 2);
        let ok = topo.chi == chi && topo.genus == Some(genus);
        if !ok {
            failures.push(m);
        }
        rows.push(json!({
            "m": m,
            "chi": topo.chi,
            "genus": topo.genus,
            "expected_chi": chi,
            "expected_genus": genus,
            "ok": ok,
        }));
        table.push(vec![
            m.to_string(),
            topo.chi.to_string(),
            topo.genus.map(|g| g.to_string()).unwrap_or_default(),
            chi.to_string(),
            genus.to_string(),
            ok.to_string(),
        ]);
    }
    let verdict = if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(format!("mismatch for m in {failures:?}")))
    };
    let rendered = Rendered {
        json: json!({ "vertices": vertices, "rows": rows, "all_ok": failures.is_empty() }),
        csv: Some(table),
        text: None,
        preferred: Format::Json,
    };
    Ok((rendered, verdict))
}
