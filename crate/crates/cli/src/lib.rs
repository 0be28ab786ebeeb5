//! Command-line front door for the relative-entropy-coding toolkit:
//! encode/decode scalar record files under a chosen mechanism and codec,
//! run the verification suites, and emit benchmark reports.

pub mod bench;
pub mod commands;
pub mod container;
pub mod verify;

use commands::CliError;
use container::MechanismSpec;

/// Parses `--mechanism NAME --params CSV` into a mechanism spec.
///
/// Parameter layouts:
///   categorical      : inputs,outputs,pmf...,row-major channel rows...
///   gaussian         : sigma,rho
///   uniform-additive : levels
pub fn parse_mechanism(name: &str, params: &str) -> Result<MechanismSpec, CliError> {
    let values: Vec<f64> = if params.trim().is_empty() {
        Vec::new()
    } else {
        params
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Format(format!("bad parameter {p:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    match name {
        "uniform-additive" => {
            if values.len() != 1 || values[0] < 1.0 || values[0].fract() != 0.0 {
                return Err(CliError::Format(
                    "uniform-additive takes one integer parameter: the level count".into(),
                ));
            }
            Ok(MechanismSpec::UniformAdditive {
                levels: values[0] as u64,
            })
        }
        "gaussian" => {
            if values.len() != 2 {
                return Err(CliError::Format(
                    "gaussian takes two parameters: sigma,rho".into(),
                ));
            }
            Ok(MechanismSpec::Gaussian {
                sigma: values[0],
                rho: values[1],
            })
        }
        "categorical" => {
            if values.len() < 2 {
                return Err(CliError::Format(
                    "categorical takes inputs,outputs,pmf...,rows...".into(),
                ));
            }
            let inputs = values[0] as usize;
            let outputs = values[1] as usize;
            let expected = 2 + inputs + inputs * outputs;
            if inputs == 0 || outputs == 0 || values.len() != expected {
                return Err(CliError::Format(format!(
                    "categorical with {inputs} inputs and {outputs} outputs needs {expected} parameters, got {}",
                    values.len()
                )));
            }
            let source_pmf = values[2..2 + inputs].to_vec();
            let channel_rows = (0..inputs)
                .map(|i| values[2 + inputs + i * outputs..2 + inputs + (i + 1) * outputs].to_vec())
                .collect();
            Ok(MechanismSpec::Categorical {
                source_pmf,
                channel_rows,
            })
        }
        other => Err(CliError::Format(format!("unknown mechanism {other:?}"))),
    }
}
