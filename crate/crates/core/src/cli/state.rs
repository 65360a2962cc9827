use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qmat::{random, BlochVector, DensityMatrix};
use crate::tomo::PureStateParams;

fn numbers(body: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let v: Vec<f64> = body
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{what}: `{s}`: {e}")))
        })
        .collect::<Result<_>>()?;
    if v.len() != expected {
        return Err(Error::Parse(format!(
            "{what} expects {expected} numbers, got {}",
            v.len()
        )));
    }
    Ok(v)
}

/// Resolves a state argument.
///
/// Generators: `singlet`, `triplet00`, `werner:p`, `mixed`, `random:seed`
/// (Hilbert–Schmidt mixed state of dimension `dim`), `haar:seed` (pure),
/// `pure:a1,a2,a3,a4,th1,th2,th4`, `bloch:x,y,z`. Anything else is read as
/// a JSON density-matrix file.
pub fn parse_state(spec: &str, dim: usize) -> Result<DensityMatrix> {
    let (head, body) = spec.split_once(':').unwrap_or((spec, ""));
    let seeded = |body: &str| -> Result<ChaCha8Rng> {
        let seed = body
            .parse::<u64>()
            .map_err(|e| Error::Parse(format!("seed `{body}`: {e}")))?;
        Ok(ChaCha8Rng::seed_from_u64(seed))
    };
    match head {
        "singlet" => Ok(DensityMatrix::singlet()),
        "triplet00" => Ok(DensityMatrix::ground(4)),
        "mixed" => Ok(DensityMatrix::maximally_mixed(dim)),
        "werner" => DensityMatrix::werner(numbers(body, 1, "werner")?[0]),
        "random" => Ok(random::random_mixed(dim, &mut seeded(body)?)),
        "haar" => Ok(random::haar_pure(dim, &mut seeded(body)?)),
        "pure" => {
            let v = numbers(body, 7, "pure")?;
            PureStateParams::new([v[0], v[1], v[2], v[3]], v[4], v[5], v[6])?.density()
        }
        "bloch" => {
            let v = numbers(body, 3, "bloch")?;
            let b = BlochVector::new(v[0], v[1], v[2]);
            if b.norm() > 1.0 + 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "Bloch vector norm {} exceeds 1",
                    b.norm()
                )));
            }
            b.to_density()
        }
        _ => read_state_file(Path::new(spec)),
    }
}

fn read_state_file(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::InvalidConfig(format!(
            "`{}` is neither a state generator nor a readable file ({e})",
            path.display()
        ))
    })?;
    Ok(serde_json::from_str(&text)?)
}
