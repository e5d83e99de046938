//! Pressure sample bookkeeping shared by every estimation route.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Bowen,
    Fk,
    Po,
    Ppo,
    Fkpo,
    Scaled,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Route::Bowen => "bowen",
            Route::Fk => "fk",
            Route::Po => "po",
            Route::Ppo => "ppo",
            Route::Fkpo => "fkpo",
            Route::Scaled => "scaled",
        };
        f.write_str(s)
    }
}

/// One (n, value) sample of (1/n)·log of a counting quantity.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PressureSample {
    pub n: usize,
    pub epsilon: f64,
    /// log sr (or its route analogue) before division by n.
    pub log_sum: f64,
    pub per_n: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SeriesParams {
    pub epsilon: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_delta: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scale: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PressureSeries {
    pub route: Route,
    pub params: SeriesParams,
    pub samples: Vec<PressureSample>,
}

impl PressureSeries {
    pub fn new(route: Route, params: SeriesParams) -> Self {
        PressureSeries {
            route,
            params,
            samples: Vec::new(),
        }
    }

    pub fn push(&mut self, n: usize, epsilon: f64, log_sum: f64) {
        self.samples.push(PressureSample {
            n,
            epsilon,
            log_sum,
            per_n: log_sum / n as f64,
        });
    }
}
