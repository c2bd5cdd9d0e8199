//! 2D incompressible wind field over the region: a stable-fluids solver on a
//! coarse periodic grid with seeded band-limited forcing.
//!
//! The field is strictly query-only with respect to rigid bodies — sampling
//! is the only coupling, so trajectories are identical whether the wind is
//! advanced or not.
//!
//! Projection uses forward-difference divergence, a 5-point Laplacian, and
//! backward-difference gradient; the trio forms an exact discrete Helmholtz
//! decomposition, so the post-projection divergence equals the Poisson solve
//! residual, which Gauss–Seidel drives below 1e-9 (well under the 1e-6
//! invariant).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::math::Vec3;

const GRID: usize = 16;
const CELL: f64 = crate::world::REGION_SIDE / GRID as f64; // 16 m
const VISCOSITY: f64 = 4.0; // m²/s
const DIFFUSE_SWEEPS: usize = 20;
const PROJECT_MAX_SWEEPS: usize = 4000;
const PROJECT_TOLERANCE: f64 = 1e-9;

/// One low-wavenumber forcing component, fixed at construction.
#[derive(Debug, Clone, Copy)]
struct ForcingMode {
    kx: f64,
    ky: f64,
    amp_u: f64,
    amp_v: f64,
    phase_u: f64,
    phase_v: f64,
    /// Temporal drift of the phase, rad/s — the "pseudo-stable chaos".
    omega: f64,
}

#[derive(Debug, Clone)]
pub struct WindField {
    u: Vec<f64>,
    v: Vec<f64>,
    modes: Vec<ForcingMode>,
    /// Scales all forcing; 0 freezes the field (useful for tests).
    forcing_amplitude: f64,
}

fn idx(i: usize, j: usize) -> usize {
    j * GRID + i
}

fn wrap(k: isize) -> usize {
    k.rem_euclid(GRID as isize) as usize
}

impl WindField {
    pub fn new(seed: u64) -> WindField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7769_6e64); // distinct stream per purpose
        let mut modes = Vec::new();
        for kx in 0..=2i32 {
            for ky in 0..=2i32 {
                if kx == 0 && ky == 0 {
                    continue;
                }
                modes.push(ForcingMode {
                    kx: kx as f64,
                    ky: ky as f64,
                    amp_u: rng.random_range(-0.3..0.3),
                    amp_v: rng.random_range(-0.3..0.3),
                    phase_u: rng.random_range(0.0..std::f64::consts::TAU),
                    phase_v: rng.random_range(0.0..std::f64::consts::TAU),
                    omega: rng.random_range(0.05..0.25),
                });
            }
        }
        WindField {
            u: vec![0.0; GRID * GRID],
            v: vec![0.0; GRID * GRID],
            modes,
            forcing_amplitude: 1.0,
        }
    }

    /// Frozen variant: no forcing, so a zero field stays exactly zero.
    pub fn calm(seed: u64) -> WindField {
        WindField { forcing_amplitude: 0.0, ..WindField::new(seed) }
    }

    pub fn grid_size(&self) -> usize {
        GRID
    }

    pub fn cell_velocity(&self, i: usize, j: usize) -> Vec3 {
        Vec3::new(self.u[idx(i, j)], self.v[idx(i, j)], 0.0)
    }

    /// One stable-fluids update: force, diffuse, self-advect, project.
    pub fn advance(&mut self, now: f64, dt: f64) {
        if dt <= 0.0 {
            return;
        }
        self.add_forcing(now, dt);
        self.u = diffuse(&self.u, dt);
        self.v = diffuse(&self.v, dt);
        let (au, av) = advect(&self.u, &self.v, dt);
        self.u = au;
        self.v = av;
        self.project();
    }

    fn add_forcing(&mut self, now: f64, dt: f64) {
        if self.forcing_amplitude == 0.0 {
            return;
        }
        let scale = self.forcing_amplitude * dt;
        for j in 0..GRID {
            for i in 0..GRID {
                let mut fu = 0.0;
                let mut fv = 0.0;
                for m in &self.modes {
                    let spatial =
                        std::f64::consts::TAU * (m.kx * i as f64 + m.ky * j as f64) / GRID as f64;
                    fu += m.amp_u * (spatial + m.phase_u + m.omega * now).cos();
                    fv += m.amp_v * (spatial + m.phase_v + m.omega * now).cos();
                }
                self.u[idx(i, j)] += fu * scale;
                self.v[idx(i, j)] += fv * scale;
            }
        }
    }

    fn project(&mut self) {
        let mut div = vec![0.0; GRID * GRID];
        for j in 0..GRID {
            for i in 0..GRID {
                let ip = wrap(i as isize + 1);
                let jp = wrap(j as isize + 1);
                div[idx(i, j)] =
                    self.u[idx(ip, j)] - self.u[idx(i, j)] + self.v[idx(i, jp)] - self.v[idx(i, j)];
            }
        }
        let mut p = vec![0.0; GRID * GRID];
        let mut sweeps = 0;
        loop {
            for j in 0..GRID {
                for i in 0..GRID {
                    let im = wrap(i as isize - 1);
                    let ip = wrap(i as isize + 1);
                    let jm = wrap(j as isize - 1);
                    let jp = wrap(j as isize + 1);
                    p[idx(i, j)] = (p[idx(im, j)] + p[idx(ip, j)] + p[idx(i, jm)] + p[idx(i, jp)]
                        - div[idx(i, j)])
                        / 4.0;
                }
            }
            sweeps += 1;
            if sweeps % 8 == 0 || sweeps >= PROJECT_MAX_SWEEPS {
                let mut worst: f64 = 0.0;
                for j in 0..GRID {
                    for i in 0..GRID {
                        let im = wrap(i as isize - 1);
                        let ip = wrap(i as isize + 1);
                        let jm = wrap(j as isize - 1);
                        let jp = wrap(j as isize + 1);
                        let lap = p[idx(im, j)] + p[idx(ip, j)] + p[idx(i, jm)] + p[idx(i, jp)]
                            - 4.0 * p[idx(i, j)];
                        worst = worst.max((lap - div[idx(i, j)]).abs());
                    }
                }
                if worst < PROJECT_TOLERANCE || sweeps >= PROJECT_MAX_SWEEPS {
                    break;
                }
            }
        }
        for j in 0..GRID {
            for i in 0..GRID {
                let im = wrap(i as isize - 1);
                let jm = wrap(j as isize - 1);
                self.u[idx(i, j)] -= p[idx(i, j)] - p[idx(im, j)];
                self.v[idx(i, j)] -= p[idx(i, j)] - p[idx(i, jm)];
            }
        }
    }

    /// Maximum absolute discrete divergence over all cells (grid units).
    pub fn max_divergence(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..GRID {
            for i in 0..GRID {
                let ip = wrap(i as isize + 1);
                let jp = wrap(j as isize + 1);
                let d = self.u[idx(ip, j)] - self.u[idx(i, j)] + self.v[idx(i, jp)]
                    - self.v[idx(i, j)];
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    /// Bilinear interpolation from cell centres; z is always 0. The grid is
    /// periodic, matching the forcing.
    pub fn sample(&self, position: Vec3) -> Vec3 {
        let gx = position.x / CELL - 0.5;
        let gy = position.y / CELL - 0.5;
        let i0 = gx.floor();
        let j0 = gy.floor();
        let fx = gx - i0;
        let fy = gy - j0;
        let i0 = wrap(i0 as isize);
        let j0 = wrap(j0 as isize);
        let i1 = wrap(i0 as isize + 1);
        let j1 = wrap(j0 as isize + 1);
        let lerp2 = |f: &[f64]| -> f64 {
            let a = f[idx(i0, j0)] * (1.0 - fx) + f[idx(i1, j0)] * fx;
            let b = f[idx(i0, j1)] * (1.0 - fx) + f[idx(i1, j1)] * fx;
            a * (1.0 - fy) + b * fy
        };
        Vec3::new(lerp2(&self.u), lerp2(&self.v), 0.0)
    }
}

/// Implicit diffusion via Gauss–Seidel on (I − a·Δ)x = x₀.
fn diffuse(field: &[f64], dt: f64) -> Vec<f64> {
    let a = VISCOSITY * dt / (CELL * CELL);
    if a == 0.0 {
        return field.to_vec();
    }
    let mut out = field.to_vec();
    for _ in 0..DIFFUSE_SWEEPS {
        for j in 0..GRID {
            for i in 0..GRID {
                let im = wrap(i as isize - 1);
                let ip = wrap(i as isize + 1);
                let jm = wrap(j as isize - 1);
                let jp = wrap(j as isize + 1);
                out[idx(i, j)] = (field[idx(i, j)]
                    + a * (out[idx(im, j)] + out[idx(ip, j)] + out[idx(i, jm)] + out[idx(i, jp)]))
                    / (1.0 + 4.0 * a);
            }
        }
    }
    out
}

/// Semi-Lagrangian self-advection with periodic backtrace.
fn advect(u: &[f64], v: &[f64], dt: f64) -> (Vec<f64>, Vec<f64>) {
    let mut nu = vec![0.0; GRID * GRID];
    let mut nv = vec![0.0; GRID * GRID];
    let n = GRID as f64;
    for j in 0..GRID {
        for i in 0..GRID {
            let k = idx(i, j);
            // Backtrace in grid units.
            let x = (i as f64 - u[k] * dt / CELL).rem_euclid(n);
            let y = (j as f64 - v[k] * dt / CELL).rem_euclid(n);
            let i0 = x.floor();
            let j0 = y.floor();
            let fx = x - i0;
            let fy = y - j0;
            let i0 = wrap(i0 as isize);
            let j0 = wrap(j0 as isize);
            let i1 = wrap(i0 as isize + 1);
            let j1 = wrap(j0 as isize + 1);
            let lerp2 = |f: &[f64]| -> f64 {
                let a = f[idx(i0, j0)] * (1.0 - fx) + f[idx(i1, j0)] * fx;
                let b = f[idx(i0, j1)] * (1.0 - fx) + f[idx(i1, j1)] * fx;
                a * (1.0 - fy) + b * fy
            };
            nu[k] = lerp2(u);
            nv[k] = lerp2(v);
        }
    }
    (nu, nv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_field_without_forcing_is_a_fixed_point() {
        let mut w = WindField::calm(1);
        for step in 0..50 {
            w.advance(step as f64 / 45.0, 1.0 / 45.0);
        }
        for j in 0..GRID {
            for i in 0..GRID {
                assert_eq!(w.cell_velocity(i, j), Vec3::ZERO);
            }
        }
    }

    #[test]
    fn divergence_below_tolerance_after_every_advance() {
        let mut w = WindField::new(42);
        for step in 0..200 {
            w.advance(step as f64 / 45.0, 1.0 / 45.0);
            assert!(w.max_divergence() < 1e-6, "divergence {}", w.max_divergence());
        }
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let mut a = WindField::new(7);
        let mut b = WindField::new(7);
        for step in 0..100 {
            let t = step as f64 / 45.0;
            a.advance(t, 1.0 / 45.0);
            b.advance(t, 1.0 / 45.0);
        }
        for j in 0..GRID {
            for i in 0..GRID {
                assert_eq!(a.cell_velocity(i, j), b.cell_velocity(i, j));
            }
        }
    }

    #[test]
    fn different_seeds_differ() {
        let mut a = WindField::new(7);
        let mut b = WindField::new(8);
        for step in 0..10 {
            let t = step as f64 / 45.0;
            a.advance(t, 1.0 / 45.0);
            b.advance(t, 1.0 / 45.0);
        }
        let same = (0..GRID)
            .flat_map(|j| (0..GRID).map(move |i| (i, j)))
            .all(|(i, j)| a.cell_velocity(i, j) == b.cell_velocity(i, j));
        assert!(!same);
    }

    #[test]
    fn sampling_identities() {
        let mut w = WindField::calm(0);
        // Hand-set two neighbouring cells; field is otherwise zero.
        w.u[idx(3, 5)] = 2.0;
        w.u[idx(4, 5)] = 4.0;
        // Cell centre of (3,5) is at ((3+.5)·16, (5+.5)·16).
        let at_centre = w.sample(Vec3::new(3.5 * 16.0, 5.5 * 16.0, 0.0));
        assert!((at_centre.x - 2.0).abs() < 1e-12);
        assert_eq!(at_centre.z, 0.0);
        // Midway between the two centres → arithmetic mean.
        let midway = w.sample(Vec3::new(4.0 * 16.0, 5.5 * 16.0, 0.0));
        assert!((midway.x - 3.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_field_samples_uniformly() {
        let mut w = WindField::calm(0);
        for k in 0..GRID * GRID {
            w.u[k] = 1.25;
            w.v[k] = -0.5;
        }
        for (x, y) in [(0.0, 0.0), (13.7, 200.1), (255.9, 31.4), (128.0, 128.0)] {
            let s = w.sample(Vec3::new(x, y, 10.0));
            assert!((s.x - 1.25).abs() < 1e-12);
            assert!((s.y + 0.5).abs() < 1e-12);
            assert_eq!(s.z, 0.0);
        }
    }

    #[test]
    fn uniform_field_is_divergence_free_and_projection_preserves_it() {
        let mut w = WindField::calm(0);
        for k in 0..GRID * GRID {
            w.u[k] = 3.0;
        }
        w.advance(0.0, 1.0 / 45.0);
        // Diffusion and advection of a uniform field are identity; projection
        // leaves it untouched (divergence already zero).
        for j in 0..GRID {
            for i in 0..GRID {
                assert!((w.cell_velocity(i, j).x - 3.0).abs() < 1e-9);
            }
        }
        assert!(w.max_divergence() < 1e-9);
    }
}
