use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A reported quantity that is not a residual.
    Info,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Rendered residual, present for failed checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
}

impl Check {
    /// A residual check: passes iff `zero`, and carries the residual text otherwise.
    pub fn residual(name: impl Into<String>, zero: bool, residual: impl FnOnce() -> String) -> Check {
        Check {
            name: name.into(),
            status: if zero { Status::Pass } else { Status::Fail },
            residual: if zero { None } else { Some(residual()) },
            value: None,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Check {
        Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, residual: None, value: None }
    }

    pub fn info(name: impl Into<String>, value: impl Into<String>) -> Check {
        Check { name: name.into(), status: Status::Info, residual: None, value: Some(value.into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapsInfo {
    pub hbar_order: u32,
    pub k_max: u32,
    pub n_max: u32,
    pub d_jet: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub model: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsInfo>,
    pub checks: Vec<Check>,
    pub runtime_ms: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} on {}\n", self.command, self.model);
        if let Some(c) = &self.caps {
            out += &format!("caps: order ℏ^{}, k_max {}, n_max {}, jets to degree {}\n", c.hbar_order, c.k_max, c.n_max, c.d_jet);
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Info => "INFO",
            };
            out += &format!("{tag}  {}", c.name);
            if let Some(v) = &c.value {
                out += &format!(": {v}");
            }
            out.push('\n');
            if let Some(r) = &c.residual {
                out += &format!("      residual: {r}\n");
            }
        }
        out += &format!("{} ({} ms)\n", if self.passed() { "ok" } else { "FAILED" }, self.runtime_ms);
        out
    }
}
