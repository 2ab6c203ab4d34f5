use mahowald_core::gradedmod::{sphere_module, stunted_module, Field};
use mahowald_core::mahowald::{build_tower, TowerWindow};
use mahowald_core::resolution::minimal_resolution;

#[test]
fn james_periodicity() {
    let mut checked = 0;
    for field in Field::ALL {
        let d = field.dim();
        for a in -8..=8 {
            for p in 0..=6 {
                for l in 0..=4u32 {
                    let period = 1i32 << l;
                    if period <= p {
                        continue;
                    }
                    let lo = stunted_module(field, a, a + p, d * (a + p)).unwrap();
                    let hi_top = a + period + p;
                    let hi = stunted_module(field, a + period, hi_top, d * hi_top).unwrap();
                    assert!(
                        lo.isomorphic_with_shift(&hi, d * period),
                        "{field:?} a={a} p={p} L={l}"
                    );
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn periodicity_needs_a_large_enough_period() {
    // period 1 is too short for two cells: Sq^2 u^0 = 0 but Sq^2 u^1 = u^2
    let a = stunted_module(Field::C, 0, 1, 2).unwrap();
    let b = stunted_module(Field::C, 1, 2, 4).unwrap();
    assert!(!a.isomorphic_with_shift(&b, 2));
}

#[test]
fn suspension_shifts_ext() {
    let base = minimal_resolution(&sphere_module(0), 5, 16).unwrap();
    for n in [-8, -4, -1, 3] {
        let r = minimal_resolution(&sphere_module(n), 5, 16 + n).unwrap();
        for s in 0..=5 {
            for t in 0..=16 {
                assert_eq!(r.num_gens(s, t + n), base.num_gens(s, t), "n={n} s={s} t={t}");
            }
        }
    }
}

#[test]
fn complex_tower_cells() {
    let tower = build_tower(Field::C, 3, TowerWindow { s_max: 3, stem_max: 4 }).unwrap();
    let x2: Vec<i32> = tower.stage(2).module.cells().iter().map(|c| c.degree).collect();
    assert_eq!(&x2[..2], &[-4, -2]);
    assert!(x2[2..].iter().all(|&t| t >= 0 && t % 2 == 0));
    assert_eq!(*x2.last().unwrap(), 2 * tower.top);

    // the bottom class of X_3 restricts to zero in X_1
    let bottom = tower.stage(3).resolution.basis_class(0, -6, 0).unwrap();
    let down = tower.restriction(2).apply(&bottom).unwrap();
    assert!(tower.restriction(1).apply(&down).unwrap().is_zero());
}

#[test]
fn quaternionic_tower_bottom_cell() {
    let tower = build_tower(Field::H, 4, TowerWindow { s_max: 2, stem_max: 2 }).unwrap();
    assert_eq!(tower.stage(4).module.min_degree(), Some(-16));
    let degrees: Vec<i32> = tower.stage(4).module.cells().iter().map(|c| c.degree).take(4).collect();
    assert_eq!(degrees, vec![-16, -12, -8, -4]);
}
