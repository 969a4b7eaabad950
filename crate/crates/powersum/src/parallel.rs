//! Multi-threaded drivers. Each produces exactly the output of its
//! sequential counterpart in `powersum-core`, for any worker count.

use powersum_core::campaign::{run_trial, summarize, CampaignConfig, CampaignSummary};
use powersum_core::construction::{
    certificate_chunks, certificate_range_top, certify_chunk, finish_certificate,
    CertificateAccumulator,
};
use powersum_core::optimizer::{assemble_report, run_restart};
use powersum_core::{
    montgomery_system, ConstructionCertificate, OptimizerConfig, OptimizerReport, Result,
};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// A pool with `workers` threads; `0` lets rayon pick.
pub fn pool(workers: usize) -> ThreadPool {
    ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

pub fn minimize(config: &OptimizerConfig, pool: &ThreadPool) -> Result<OptimizerReport> {
    config.validate()?;
    let outcomes = pool.install(|| {
        (0..config.restarts)
            .into_par_iter()
            .map(|r| run_restart(config, r))
            .collect()
    });
    Ok(assemble_report(config, outcomes))
}

pub fn certify(p: u64, pool: &ThreadPool) -> Result<ConstructionCertificate> {
    let system = montgomery_system(p)?;
    let parts: Vec<CertificateAccumulator> = pool.install(|| {
        certificate_chunks(certificate_range_top(p))
            .into_par_iter()
            .map(|(first, last)| certify_chunk(&system, p, first, last))
            .collect()
    });
    let acc = parts.into_iter().fold(
        CertificateAccumulator::default(),
        CertificateAccumulator::merge,
    );
    finish_certificate(p, acc)
}

pub fn run_campaign(config: CampaignConfig, pool: &ThreadPool) -> Result<CampaignSummary> {
    config.validate()?;
    let outcomes: Vec<_> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|t| (t, run_trial(&config, t)))
            .collect()
    });
    Ok(summarize(config, outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_sequential_drivers() {
        let c = OptimizerConfig::new(3, 9)
            .with_seed(4)
            .with_restarts(6)
            .with_iterations(120);
        let seq = powersum_core::minimize(&c).unwrap();
        for w in [1, 3] {
            assert_eq!(minimize(&c, &pool(w)).unwrap(), seq);
        }

        let seq = powersum_core::certify(47).unwrap();
        for w in [1, 4] {
            assert_eq!(certify(47, &pool(w)).unwrap(), seq);
        }

        let cfg = CampaignConfig {
            trials: 40,
            n_max: 6,
            m_max: 50,
            seed: 1,
        };
        let seq = powersum_core::campaign::run_campaign(cfg).unwrap();
        assert_eq!(run_campaign(cfg, &pool(3)).unwrap(), seq);
    }
}
