mod args;
mod commands;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use serde_json::{json, Value};

use args::{Cli, Command, FunctionOpts, QuadratureOpts};
use output::{Body, Failure, Outcome};

fn quadrature_config(m: usize, q: &QuadratureOpts) -> Value {
    let (n, t) = commands::resolve_nodes(m, q);
    json!({ "source_nodes": n, "target_nodes": t, "max_j": q.max_j, "max_k": q.max_k })
}

fn function_config(f: &FunctionOpts) -> Result<Value, Failure> {
    let spec = commands::parse_function(&f.function)?;
    Ok(json!({ "spec": spec, "sign": f.sign }))
}

/// Subcommand name and its fully resolved configuration.
fn resolve(cli: &Cli) -> Result<(&'static str, Value), Failure> {
    let (name, mut cfg) = match &cli.command {
        Command::Kernel(a) => ("kernel", serde_json::to_value(a)?),
        Command::KernelTable(a) => ("kernel-table", serde_json::to_value(a)?),
        Command::Transform(a) => {
            let mut v = serde_json::to_value(a)?;
            v["quadrature"] = quadrature_config(a.m, &a.quadrature);
            v["function"] = function_config(&a.function)?;
            ("transform", v)
        }
        Command::Verify(a) => {
            let mut v = serde_json::to_value(a)?;
            v["quadrature"] = quadrature_config(a.m, &a.quadrature);
            ("verify", v)
        }
        Command::Heisenberg(a) => {
            let mut v = serde_json::to_value(a)?;
            v["quadrature"] = quadrature_config(a.m, &a.quadrature);
            v["function"] = function_config(&a.function)?;
            ("heisenberg", v)
        }
        Command::Hardy(a) => {
            let mut v = serde_json::to_value(a)?;
            v["quadrature"] = quadrature_config(a.m, &a.quadrature);
            v["function"] = function_config(&a.function)?;
            ("hardy", v)
        }
        Command::Specfn(a) => ("specfn", serde_json::to_value(a)?),
    };
    cfg["seed"] = json!(cli.seed);
    Ok((name, cfg))
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Kernel(a) => commands::kernel(a),
        Command::KernelTable(a) => commands::kernel_table(a),
        Command::Transform(a) => commands::transform(a),
        Command::Verify(a) => verify::run(a, cli.seed),
        Command::Heisenberg(a) => commands::heisenberg_cmd(a),
        Command::Hardy(a) => commands::hardy_cmd(a),
        Command::Specfn(a) => commands::specfn(a),
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::other(e.to_string()))?;
    }
    let (name, config) = resolve(cli)?;
    if cli.dry_run {
        let text = serde_json::to_string_pretty(&output::dry_run(name, &config))? + "\n";
        output::write(cli.output.as_deref(), &text)?;
        return Ok(0);
    }
    let outcome = execute(cli)?;
    let text = match outcome.body {
        Body::Json(v) => serde_json::to_string_pretty(&output::envelope(name, &config, v))? + "\n",
        Body::Csv(s) | Body::Text(s) => s,
    };
    output::write(cli.output.as_deref(), &text)?;
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
