use serde::Serialize;
use serde_json::Value;
use std::time::Instant;

use recmeth_core::{Budget, FORMAT_VERSION};

pub struct Ctx {
    pub budget: Budget,
    budget_source: &'static str,
    timing: bool,
    start: Instant,
}

impl Ctx {
    pub fn new(budget: Budget, budget_source: &'static str, timing: bool) -> Self {
        Self {
            budget,
            budget_source,
            timing,
            start: Instant::now(),
        }
    }

    pub fn timing(&self) -> bool {
        self.timing
    }
}

#[derive(Serialize)]
struct BudgetInfo {
    max_checks: u64,
    source: &'static str,
}

/// Every JSON report: tool identity, the parsed command line, the budget in
/// force and the result. Byte-identical across runs unless `--timing`.
#[derive(Serialize)]
struct Envelope<'a, I: Serialize> {
    format: u32,
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    input: &'a I,
    budget: BudgetInfo,
    budget_exhausted: bool,
    #[serde(skip_serializing_if = "<[String]>::is_empty")]
    warnings: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_seconds: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    result: &'a Value,
}

/// What a command produced.
pub struct Output {
    body: Body,
    pub warnings: Vec<String>,
    /// Exit 1 after printing (a check inside the result failed).
    pub failed: bool,
    pub failure_message: Option<String>,
}

enum Body {
    Json(Value),
    Text(String),
}

impl Output {
    pub fn json<T: Serialize>(result: &T) -> anyhow::Result<Self> {
        Ok(Self {
            body: Body::Json(serde_json::to_value(result)?),
            warnings: Vec::new(),
            failed: false,
            failure_message: None,
        })
    }

    pub fn text(text: impl Into<String>) -> Self {
        let mut text = text.into();
        if !text.ends_with('\n') {
            text.push('\n');
        }
        Self {
            body: Body::Text(text),
            warnings: Vec::new(),
            failed: false,
            failure_message: None,
        }
    }

    pub fn with_warnings(mut self, warnings: Vec<String>) -> Self {
        self.warnings.extend(warnings);
        self
    }

    pub fn fail(mut self, message: impl Into<String>) -> Self {
        self.failed = true;
        self.failure_message = Some(message.into());
        self
    }

    pub fn render<I: Serialize>(&self, ctx: &Ctx, command: &str, input: &I) -> String {
        match &self.body {
            Body::Text(t) => {
                for w in &self.warnings {
                    eprintln!("warning: {w}");
                }
                t.clone()
            }
            Body::Json(v) => to_json(&Envelope {
                format: FORMAT_VERSION,
                tool: "recmeth",
                version: env!("CARGO_PKG_VERSION"),
                command,
                input,
                budget: budget_info(ctx),
                budget_exhausted: false,
                warnings: &self.warnings,
                timing_seconds: ctx.timing.then(|| ctx.start.elapsed().as_secs_f64()),
                error: None,
                result: v,
            }),
        }
    }
}

fn budget_info(ctx: &Ctx) -> BudgetInfo {
    BudgetInfo {
        max_checks: ctx.budget.max_checks,
        source: ctx.budget_source,
    }
}

/// Report for a run stopped by the work budget.
pub fn exhausted<I: Serialize>(ctx: &Ctx, command: &str, input: &I, message: &str) -> String {
    to_json(&Envelope {
        format: FORMAT_VERSION,
        tool: "recmeth",
        version: env!("CARGO_PKG_VERSION"),
        command,
        input,
        budget: budget_info(ctx),
        budget_exhausted: true,
        warnings: &[],
        timing_seconds: None,
        error: Some(message),
        result: &Value::Null,
    })
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Write pretty JSON to a file.
pub fn write_json<T: Serialize>(path: &std::path::Path, v: &T) -> anyhow::Result<()> {
    std::fs::write(path, to_json(v)).map_err(|e| anyhow::anyhow!("writing {}: {e}", path.display()))
}
