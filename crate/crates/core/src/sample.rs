//! Seeded random group points and algebra elements for identity checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraElement, GroupPoint};
use crate::theta::Theta;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point<R: Rng>(rng: &mut R, radius: i64) -> GroupPoint {
    GroupPoint::new(rng.random_range(-radius..=radius), rng.random_range(-radius..=radius))
}

/// Element with `support` random points in the box of the given radius and coefficients
/// uniform in the unit square.
pub fn random_element<R: Rng>(rng: &mut R, theta: Theta, support: usize, radius: i64) -> AlgebraElement {
    let coeffs = (0..support).map(|_| {
        let x = random_point(rng, radius);
        let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        (x, c)
    });
    AlgebraElement::from_coeffs(theta, coeffs)
}

/// Real combination of the generators `d_x`.
pub fn random_symmetric<R: Rng>(rng: &mut R, theta: Theta, terms: usize, radius: i64) -> AlgebraElement {
    let mut out = AlgebraElement::zero(theta);
    for _ in 0..terms {
        let x = random_point(rng, radius);
        let c = rng.random_range(-1.0..1.0);
        out = out
            .add(&AlgebraElement::d_generator(x, theta).scale(Complex64::new(c, 0.0)))
            .expect("same theta");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_repeat() {
        let theta = Theta::rational(1, 5).unwrap();
        let a = random_element(&mut rng(7), theta, 6, 3);
        let b = random_element(&mut rng(7), theta, 6, 3);
        assert_eq!(a, b);
    }

    #[test]
    fn symmetric_samples_are_symmetric() {
        let theta = Theta::real(0.7).unwrap();
        let f = random_symmetric(&mut rng(3), theta, 5, 4);
        assert!(f.is_symmetric());
    }
}
