//! `table`: machine costs over qubit counts and prices per qubit.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use qec_blueprint::cost::{cost_table, PricePoint, TABLE1_COUNTS, TABLE1_PPQ_CENTS};
use qec_blueprint::Result;

use crate::config::merge;
use crate::report::{Envelope, Provenance, Source};
use crate::write_file;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    #[default]
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableArgs {
    /// Physical qubit counts, comma separated [default: 20000000,200000000].
    #[arg(long, value_delimiter = ',')]
    pub counts: Option<Vec<u64>>,
    /// Prices per qubit in dollars, comma separated [default: 1000,1,0.01].
    #[arg(long, value_delimiter = ',')]
    pub ppq: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct TableCmd {
    #[command(flatten)]
    pub args: TableArgs,
    /// JSON config file; explicit flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: TableFormat,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct TableConfig {
    pub counts: Vec<u64>,
    pub ppq_cents: Vec<u64>,
}

pub fn run(cmd: &TableCmd, out: &mut dyn Write) -> Result<()> {
    let a = merge(&cmd.args, cmd.config.as_deref())?;
    let mut prov = Provenance::new();
    let counts = match a.counts {
        Some(c) => {
            prov.insert("counts".into(), Source::User);
            c
        }
        None => {
            prov.insert("counts".into(), Source::PaperAnchor);
            TABLE1_COUNTS.iter().map(|c| c.0).collect()
        }
    };
    let ppqs = match a.ppq {
        Some(list) => {
            prov.insert("ppq".into(), Source::User);
            list.iter().map(|s| PricePoint::parse(s)).collect::<Result<Vec<_>>>()?
        }
        None => {
            prov.insert("ppq".into(), Source::PaperAnchor);
            TABLE1_PPQ_CENTS.iter().map(|&c| PricePoint::from_cents(c)).collect::<Result<Vec<_>>>()?
        }
    };
    let table = cost_table(&counts, &ppqs)?;
    let config = TableConfig {
        counts,
        ppq_cents: ppqs.iter().map(|p| p.ppq_cents).collect(),
    };
    let text = table.to_text();
    let csv = table.to_csv()?;
    let json = Envelope::new("table", None, config, prov, table).to_json()?;
    if let Some(path) = &cmd.json_out {
        write_file(path, &json)?;
    }
    let body = match cmd.format {
        TableFormat::Text => text,
        TableFormat::Csv => csv,
        TableFormat::Json => json,
    };
    out.write_all(body.as_bytes())?;
    Ok(())
}
