//! Command-line function literals and CSV tables.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use funceq::{Evaluable, SampledFunction, SolutionFamily};

/// A parsed literal: the evaluable plus whether it came from a table.
#[derive(Clone)]
pub struct FuncArg {
    pub func: Arc<dyn Evaluable>,
    pub table: Option<SampledFunction>,
}

impl FuncArg {
    pub fn as_dyn(&self) -> &dyn Evaluable {
        self.func.as_ref()
    }
}

fn params(body: &str, allowed: &[&str]) -> Result<BTreeMap<String, f64>, String> {
    let mut out = BTreeMap::new();
    for part in body.split(',').filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, got `{part}`"))?;
        let k = k.trim();
        if !allowed.contains(&k) {
            return Err(format!("unknown parameter `{k}` (expected one of {allowed:?})"));
        }
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| format!("parameter `{k}`: `{v}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("parameter `{k}` must be finite"));
        }
        if out.insert(k.to_string(), v).is_some() {
            return Err(format!("parameter `{k}` given twice"));
        }
    }
    Ok(out)
}

fn take(p: &BTreeMap<String, f64>, key: &str) -> Result<f64, String> {
    p.get(key).copied().ok_or_else(|| format!("missing parameter `{key}`"))
}

/// Parses `affine:c=2`, `linear:c=1`, `exp:rho=0.7`, `hrho:c=1,rho=2`, `const:1` or
/// `table:<path>`.
pub fn parse_literal(s: &str) -> Result<FuncArg, String> {
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| format!("function literal `{s}` must look like kind:params"))?;
    let family = |f: funceq::Result<SolutionFamily>| -> Result<FuncArg, String> {
        let f = f.map_err(|e| e.to_string())?;
        Ok(FuncArg { func: Arc::new(f), table: None })
    };
    match kind {
        "affine" => {
            let p = params(body, &["c"])?;
            family(SolutionFamily::affine(take(&p, "c")?))
        }
        "linear" => {
            let p = params(body, &["c"])?;
            family(SolutionFamily::linear(take(&p, "c")?))
        }
        "exp" => {
            let p = params(body, &["rho"])?;
            family(SolutionFamily::exponential(take(&p, "rho")?))
        }
        "hrho" => {
            let p = params(body, &["c", "rho"])?;
            let c = p.get("c").copied().unwrap_or(1.0);
            family(SolutionFamily::rho_kernel(c, take(&p, "rho")?))
        }
        "const" => {
            let v: f64 = body
                .trim()
                .parse()
                .map_err(|_| format!("const value `{body}` is not a number"))?;
            if !v.is_finite() {
                return Err("const value must be finite".into());
            }
            if v == 1.0 {
                family(Ok(SolutionFamily::ConstantOne))
            } else {
                Ok(FuncArg { func: Arc::new(move |_: f64| v), table: None })
            }
        }
        "table" => {
            let t = read_table(Path::new(body))?;
            Ok(FuncArg { func: Arc::new(t.clone()), table: Some(t) })
        }
        _ => Err(format!(
            "unknown function kind `{kind}` (expected affine, linear, exp, hrho, const or table)"
        )),
    }
}

/// Reads a CSV with header `x,value` and strictly increasing `x`.
pub fn read_table(path: &Path) -> Result<SampledFunction, String> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let headers = rdr
        .headers()
        .map_err(|e| format!("{}: line 1: {e}", path.display()))?
        .clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "value" {
        return Err(format!("{}: line 1: header must be `x,value`", path.display()));
    }
    let (mut xs, mut values) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let cell = |i: usize, name: &str| -> Result<f64, String> {
            let raw = rec.get(i).unwrap_or("");
            let v: f64 = raw.parse().map_err(|_| {
                format!("{}: line {line}: {name} `{raw}` is not a number", path.display())
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("{}: line {line}: {name} must be finite", path.display()))
            }
        };
        let x = cell(0, "x")?;
        let y = cell(1, "value")?;
        if let Some(&prev) = xs.last() {
            if x <= prev {
                return Err(format!(
                    "{}: line {line}: x = {x} is not greater than the previous x = {prev}",
                    path.display()
                ));
            }
        }
        if x < 0.0 {
            return Err(format!("{}: line {line}: x must be non-negative", path.display()));
        }
        xs.push(x);
        values.push(y);
    }
    SampledFunction::new(xs, values).map_err(|e| format!("{}: {e}", path.display()))
}

/// `min:max:count`, inclusive and uniform.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid `{s}` must be min:max:count"));
    }
    let min: f64 = parts[0].parse().map_err(|_| format!("grid min `{}` is not a number", parts[0]))?;
    let max: f64 = parts[1].parse().map_err(|_| format!("grid max `{}` is not a number", parts[1]))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| format!("grid count `{}` is not a non-negative integer", parts[2]))?;
    if count < 2 {
        return Err("grid count must be at least 2".into());
    }
    funceq::domain::uniform_grid(min, max, count).map_err(|e| e.to_string())
}

/// `dyadic:L=10,X=5` or `zsqrt2:N=50,X=5`.
pub fn parse_subgroup(s: &str) -> Result<funceq::DenseSubgroupSpec, String> {
    let (kind, body) = s
        .split_once(':')
        .ok_or_else(|| format!("subgroup `{s}` must look like dyadic:L=..,X=.. or zsqrt2:N=..,X=.."))?;
    let int = |v: f64, name: &str| -> Result<u64, String> {
        if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as u64)
        } else {
            Err(format!("subgroup parameter {name} must be a non-negative integer"))
        }
    };
    match kind {
        "dyadic" => {
            let p = params(body, &["L", "X"])?;
            Ok(funceq::DenseSubgroupSpec::Dyadic {
                level: int(take(&p, "L")?, "L")? as u32,
                bound: take(&p, "X")?,
            })
        }
        "zsqrt2" => {
            let p = params(body, &["N", "X"])?;
            Ok(funceq::DenseSubgroupSpec::ZAdjoinSqrt2 {
                coeff_bound: int(take(&p, "N")?, "N")?,
                bound: take(&p, "X")?,
            })
        }
        _ => Err(format!("unknown subgroup kind `{kind}` (expected dyadic or zsqrt2)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn literals() {
        let f = parse_literal("affine:c=2").unwrap();
        assert_eq!(f.func.eval(1.5).unwrap(), 4.0);
        let f = parse_literal("hrho:c=1,rho=2").unwrap();
        assert!((f.func.eval(1.0).unwrap() - (1.0 - (-2.0f64).exp()) / 2.0).abs() < 1e-15);
        assert_eq!(parse_literal("const:1").unwrap().func.eval(9.0).unwrap(), 1.0);
        assert_eq!(parse_literal("const:2.5").unwrap().func.eval(9.0).unwrap(), 2.5);
        assert!(parse_literal("affine:rho=2").is_err());
        assert!(parse_literal("linear:c=0").is_err());
        assert!(parse_literal("spline:c=1").is_err());
        assert!(parse_literal("affine").is_err());
    }

    #[test]
    fn grids_and_subgroups() {
        let g = parse_grid("0:1:5").unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(parse_grid("0:1:1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(matches!(
            parse_subgroup("zsqrt2:N=50,X=5").unwrap(),
            funceq::DenseSubgroupSpec::ZAdjoinSqrt2 { coeff_bound: 50, .. }
        ));
        assert!(parse_subgroup("dyadic:L=1.5,X=5").is_err());
    }

    #[test]
    fn csv_errors_name_lines() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "x,value\n0.1,1\n0.2,abc").unwrap();
        let e = read_table(f.path()).unwrap_err();
        assert!(e.contains("line 3"), "{e}");

        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "x,value\n0.1,1\n0.3,2\n0.2,3").unwrap();
        let e = read_table(f.path()).unwrap_err();
        assert!(e.contains("line 4"), "{e}");

        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "t,y\n0.1,1").unwrap();
        assert!(read_table(f.path()).unwrap_err().contains("header"));

        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "x,value\n0.1,1\n0.2,1.5\n0.3,2").unwrap();
        let t = read_table(f.path()).unwrap();
        assert_eq!(t.len(), 3);
    }
}
