use powersum_core::construction::{
    certificate_chunks, certificate_range_top, certify, certify_chunk, finish_certificate,
    montgomery_numerators, CertificateAccumulator,
};
use powersum_core::montgomery_system;
use powersum_core::system::{max_abs_over_range, EvaluationRange};
use powersum_core::turns;

const PRIMES: [u64; 8] = [3, 5, 7, 11, 13, 17, 19, 23];

#[test]
fn certificates_attain_root_p() {
    for p in PRIMES {
        let c = certify(p).unwrap();
        assert!(
            (c.observed_max - (p as f64).sqrt()).abs() <= 1e-8,
            "p = {p}"
        );
        assert_eq!(c.per_nu_class.total(), certificate_range_top(p));
        assert_eq!(c.range_top, (p - 1) * (p - 1) + p - 2);
        let n = p - 1;
        // (p−1) | ν with p ∤ ν gives −1; p | ν gives 0; everything else √p.
        let principal = (1..=c.range_top)
            .filter(|nu| nu % n == 0 && nu % p != 0)
            .count() as u64;
        let zero = (1..=c.range_top).filter(|nu| nu % p == 0).count() as u64;
        assert_eq!(c.per_nu_class.principal_nonzero, principal);
        assert_eq!(c.per_nu_class.zero, zero);
    }
}

#[test]
fn nonprincipal_exponents_give_gauss_sums() {
    for p in PRIMES {
        let s = montgomery_system(p).unwrap();
        let root = (p as f64).sqrt();
        for nu in 1..(p * (p - 1)) as i64 {
            if !(nu as u64).is_multiple_of(p - 1) && !(nu as u64).is_multiple_of(p) {
                assert!(
                    (s.eval(nu).norm() - root).abs() <= 1e-8,
                    "p = {p}, nu = {nu}"
                );
            }
        }
    }
}

#[test]
fn sweep_maximum_agrees_with_certificate() {
    for p in PRIMES {
        let s = montgomery_system(p).unwrap();
        let (value, _) =
            max_abs_over_range(&s, EvaluationRange::new(certificate_range_top(p)).unwrap());
        assert!((value - certify(p).unwrap().observed_max).abs() <= 1e-12);
    }
}

#[test]
fn angles_are_exact_rationals() {
    for p in PRIMES {
        let den = p * (p - 1);
        let numerators = montgomery_numerators(p).unwrap();
        let s = montgomery_system(p).unwrap();
        for (&num, &a) in numerators.iter().zip(s.angles()) {
            assert!(num < den);
            assert_eq!(turns::reduce(a), a);
            assert!((a * den as f64 - num as f64).abs() <= 1e-9);
        }
        let mut sorted = numerators.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), numerators.len(), "points are distinct");
    }
}

#[test]
fn chunked_certification_is_order_independent() {
    let p = 43;
    let s = montgomery_system(p).unwrap();
    let chunks = certificate_chunks(certificate_range_top(p));
    assert_eq!(chunks.first(), Some(&(1, 1023)));
    assert_eq!(chunks.last().unwrap().1, certificate_range_top(p));
    let merged = |order: &mut dyn Iterator<Item = &(u64, u64)>| {
        order.map(|&(a, b)| certify_chunk(&s, p, a, b)).fold(
            CertificateAccumulator::default(),
            CertificateAccumulator::merge,
        )
    };
    let forward = merged(&mut chunks.iter());
    let backward = merged(&mut chunks.iter().rev());
    assert_eq!(forward, backward);
    let whole = certify_chunk(&s, p, 1, certificate_range_top(p));
    assert_eq!(forward, whole);
    assert_eq!(finish_certificate(p, forward).unwrap(), certify(p).unwrap());
}
