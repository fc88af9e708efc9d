use proptest::prelude::*;
use ptseries::wedges::{ground_angle, lattice_index, pt_pairs, wedge_centers, PiFraction};

fn expected_count(n: u32) -> usize {
    if n % 2 == 1 {
        ((n - 1) / 2) as usize
    } else {
        ((n + 2) / 2) as usize
    }
}

#[test]
fn known_angles() {
    assert_eq!(ground_angle(3).unwrap(), PiFraction::new(-1, 10));
    assert_eq!(ground_angle(2).unwrap(), PiFraction::new(0, 1));
    assert_eq!(ground_angle(7).unwrap(), PiFraction::new(-5, 18));
    let p7 = pt_pairs(7).unwrap();
    let right: Vec<String> = p7.iter().map(|p| p.theta_right.to_string()).collect();
    let left: Vec<String> = p7.iter().map(|p| p.theta_left.to_string()).collect();
    assert_eq!(right, ["π/6", "-π/18", "-5π/18"]);
    assert_eq!(left, ["5π/6", "-17π/18", "-13π/18"]);
}

#[test]
fn n5_pairs() {
    let p5 = pt_pairs(5).unwrap();
    assert_eq!(p5.len(), 2);
    assert_eq!(p5[0].theta_right, PiFraction::new(1, 14));
    assert_eq!(p5[0].theta_left, PiFraction::new(13, 14));
    assert_eq!(p5[1].theta_right, PiFraction::new(-3, 14));
    assert_eq!(p5[1].theta_left, PiFraction::new(-11, 14));
}

#[test]
fn rejects_small_n() {
    assert!(pt_pairs(1).is_err());
    assert!(pt_pairs(0).is_err());
    assert!(ground_angle(1).is_err());
}

/// `(i e^{i theta})^((N+2)/2)` is real and positive on a wedge centre, i.e.
/// `(iz)^N z^2` is real and positive along the ray.
fn is_decay_direction(n: u32, theta: PiFraction) -> bool {
    // phase / pi of (i e^{i theta})^(N+2) = (N+2)(1/2 + theta/pi), must be an even integer
    let num = (n as i64 + 2) * (theta.den() + 2 * theta.num());
    let den = 2 * theta.den();
    num % den == 0 && (num / den) % 2 == 0
}

proptest! {
    #[test]
    fn pair_structure(n in 2u32..=25) {
        let pairs = pt_pairs(n).unwrap();
        prop_assert_eq!(pairs.len(), expected_count(n));
        let centres = wedge_centers(n).unwrap();
        prop_assert_eq!(centres.len(), n as usize + 2);
        let sym = pairs.iter().filter(|p| p.p_symmetric).count();
        if n % 2 == 1 {
            prop_assert_eq!(sym, 0);
        } else {
            prop_assert!(sym >= 1);
            prop_assert_eq!(pairs.iter().filter(|p| p.on_imaginary_axis()).count(), 1);
        }
        for w in pairs.windows(2) {
            prop_assert!(w[0].theta_right.to_f64() > w[1].theta_right.to_f64());
        }
        let lattice = n as i64 + 2;
        for p in &pairs {
            prop_assert_eq!(p.half_width, PiFraction::new(1, lattice));
            if p.on_imaginary_axis() {
                // each wedge is its own PT image; parity swaps them
                prop_assert_eq!(p.theta_right.pt_image(), p.theta_right);
                prop_assert_eq!(p.theta_left.pt_image(), p.theta_left);
                prop_assert_eq!(p.theta_right.parity_image(), p.theta_left);
            } else {
                prop_assert_eq!(p.theta_left, p.theta_right.pt_image());
                prop_assert_eq!(p.theta_left.pt_image(), p.theta_right);
            }
            prop_assert!(centres.contains(&p.theta_right));
            prop_assert!(centres.contains(&p.theta_left));
            prop_assert!(is_decay_direction(n, p.theta_right));
            prop_assert!(is_decay_direction(n, p.theta_left));
            let i = lattice_index(n, p.theta_right).unwrap();
            let j = lattice_index(n, p.theta_left).unwrap();
            let gap = (i - j).rem_euclid(lattice);
            prop_assert!(gap != 0 && gap != 1 && gap != lattice - 1, "adjacent or self-paired");
            if p.p_symmetric {
                prop_assert_eq!(p.theta_right.parity_image(), p.theta_left);
            }
        }
        for c in &centres {
            prop_assert!(is_decay_direction(n, *c));
        }
    }

    #[test]
    fn reflection_is_an_involution(num in -1000i64..1000, den in 1i64..200) {
        let t = PiFraction::new(num, den);
        prop_assert_eq!(t.pt_image().pt_image(), t);
        prop_assert_eq!(t.parity_image().parity_image(), t);
        let v = t.to_f64();
        prop_assert!(v > -std::f64::consts::PI && v <= std::f64::consts::PI + 1e-15);
    }
}
