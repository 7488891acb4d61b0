//! `ingest`: parse, validate, and canonically re-emit a record stream.

use std::fs;
use std::process::ExitCode;

use anyhow::Result;
use decision_bench_core::record::{emit_records_gz, validate_dataset};
use decision_bench_core::tagger::TaggerConfig;

use crate::manifest::Manifest;
use crate::output::write_artifact;
use crate::IngestArgs;

pub fn run(args: &IngestArgs) -> Result<ExitCode> {
    fs::create_dir_all(&args.out_dir)?;
    let tagger_version = TaggerConfig::default().version;
    let mut manifest = Manifest::load_or_new(&args.out_dir, &tagger_version)?;
    manifest.record_input_file("records", &args.records)?;

    let pool = super::load_pool(args.pool.as_deref())?;
    let pool_bytes = serde_json::to_vec(&pool)?;
    manifest.record_input("pool", crate::manifest::sha256_hex(&pool_bytes));

    let records = super::load_records(&args.records)?;
    let violations = validate_dataset(&records, &pool);

    let hash = manifest.artifact_hash(&["records", "pool"]);
    let rows: Vec<String> = violations.iter().map(|v| v.report_line()).collect();
    write_artifact(
        &args.out_dir.join("validation_report.txt"),
        &hash,
        &[format!("violations: {}", violations.len())],
        "cell\ttask_id\tmessage",
        &rows,
    )?;

    let canonical = args.out_dir.join("records_canonical.jsonl.gz");
    let file = fs::File::create(&canonical)?;
    emit_records_gz(&records, file)?;

    manifest.record_flags(
        "ingest",
        &[("records", args.records.display().to_string())],
    );
    manifest.save(&args.out_dir)?;

    println!(
        "ingest: {} records, {} violations -> {}",
        records.len(),
        violations.len(),
        args.out_dir.display()
    );
    Ok(if violations.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
