use anyhow::{bail, Result};
use boxball::DensityVector;
use clap::Args;

/// Letter densities. Give at most one of --p, --p1, --q, --uniform; the
/// default is uniform. --q and --uniform need --kappa.
#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Number of ball colors.
    #[arg(long)]
    pub kappa: Option<usize>,
    /// Densities p_0,...,p_kappa (comma separated, summing to 1).
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["p1", "q", "uniform"])]
    pub p: Option<Vec<f64>>,
    /// Ball density for one color; same as --p 1-p1,p1.
    #[arg(long, conflicts_with_all = ["q", "uniform"])]
    pub p1: Option<f64>,
    /// Principal specialization p_i proportional to q^i.
    #[arg(long, conflicts_with = "uniform")]
    pub q: Option<f64>,
    /// All kappa+1 letters equally likely.
    #[arg(long)]
    pub uniform: bool,
}

impl DensityArgs {
    pub fn resolve(&self) -> Result<DensityVector> {
        let p = if let Some(p) = &self.p {
            DensityVector::new(p.clone())?
        } else if let Some(p1) = self.p1 {
            if self.kappa.is_some_and(|k| k != 1) {
                bail!("--p1 implies --kappa 1");
            }
            DensityVector::two_letter(p1)?
        } else {
            let Some(kappa) = self.kappa else {
                bail!("--kappa is required with --q or --uniform");
            };
            if kappa == 0 {
                bail!("--kappa must be positive");
            }
            match self.q {
                Some(q) => DensityVector::principal(q, kappa)?,
                None => DensityVector::uniform(kappa),
            }
        };
        if let Some(k) = self.kappa {
            if k != p.kappa() {
                bail!("--kappa {k} does not match {} densities", p.kappa() + 1);
            }
        }
        Ok(p)
    }
}
