//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Exits nonzero when any criterion fails, except those listed as known
//! failures in the README. `VOXGRID_ACCEPTANCE_STRICT=1` makes those fatal
//! too. `VOXGRID_UPDATE_GOLDEN=1` rewrites the golden grids.

use std::collections::{HashMap, HashSet};
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use voxgrid_core::grid::{read_dump, write_dump};
use voxgrid_core::{
    bresenham_line, bresenham_trace_image, bundle_dimensions, camera_to_grid_transform, depth_to_cloud, generate_rays,
    merge_grids, populate_occupied, trace_bundle, GridSpec, IntegratorConfig, LocalMapper, MeasurementFrame,
    Parallelism, PipelineConfig, PointCloud, Ray, RayBundle, RigidTransform, Vec3, VoxelCoord, VoxelGrid, VoxelState,
    VoxelWalker,
};
use voxgrid_simbench::{
    camera_pose, compare_methods, render_depth, sweep_points_benchmark, sweep_rays_benchmark, sweep_voxels_benchmark,
    top_decade_slope, Scene, SweepOptions, Trajectory,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Criterion {
    id: &'static str,
    name: &'static str,
    run: fn() -> Outcome,
    known_failure: bool,
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: "1",
        name: "traversal completeness",
        run: traversal_completeness,
        known_failure: false,
    },
    Criterion {
        id: "2",
        name: "bresenham subset",
        run: bresenham_subset,
        known_failure: false,
    },
    Criterion {
        id: "3",
        name: "trace semantics, parallel vs sequential",
        run: trace_semantics,
        known_failure: false,
    },
    Criterion {
        id: "4",
        name: "populate parallel equivalence",
        run: populate_equivalence,
        known_failure: false,
    },
    Criterion {
        id: "5",
        name: "merge oracle and idempotence",
        run: merge_oracle,
        known_failure: false,
    },
    Criterion {
        id: "6",
        name: "bundle geometry",
        run: bundle_geometry,
        known_failure: false,
    },
    Criterion {
        id: "7",
        name: "ray economy",
        run: ray_economy,
        known_failure: false,
    },
    Criterion {
        id: "8",
        name: "scaling slopes",
        run: scaling_slopes,
        known_failure: false,
    },
    Criterion {
        id: "9a",
        name: "conservativeness, box field",
        run: conservative_box_field,
        known_failure: false,
    },
    Criterion {
        id: "9b",
        name: "conservativeness, wall",
        run: conservative_wall,
        known_failure: true,
    },
    Criterion {
        id: "10",
        name: "trace speedup",
        run: trace_speedup,
        known_failure: false,
    },
    Criterion {
        id: "11",
        name: "shift correctness",
        run: shift_correctness,
        known_failure: false,
    },
    Criterion {
        id: "12",
        name: "receding obstacle",
        run: receding_obstacle,
        known_failure: false,
    },
];

fn main() {
    let strict = std::env::var("VOXGRID_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    let mut fatal = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let out = (c.run)();
        let secs = start.elapsed().as_secs_f64();
        let tag = match (out.pass, c.known_failure) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag} [{}] {}: {} ({secs:.1} s)", c.id, c.name, out.detail);
        if !out.pass && (strict || !c.known_failure) {
            fatal += 1;
        }
    }
    if fatal > 0 {
        println!("{fatal} criterion check(s) failed");
        std::process::exit(1);
    }
}

fn cube_spec(n: usize, vox: f64) -> GridSpec<f64> {
    GridSpec::from_dims([n, n, n], vox, Vec3::zeros()).unwrap()
}

fn random_vec(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Vec3<f64> {
    Vec3::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

fn random_pose(rng: &mut ChaCha8Rng, translation: Vec3<f64>) -> RigidTransform<f64> {
    let axis = random_vec(rng, -1.0, 1.0) + Vec3::new(0.0, 0.0, 1e-3);
    RigidTransform::from_axis_angle(axis, rng.gen_range(-3.1..3.1), translation)
}

fn random_state(rng: &mut ChaCha8Rng) -> VoxelState {
    VoxelState::from_byte(rng.gen_range(0..4)).unwrap()
}

fn pool() -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap()
}

/// Length of the part of segment `a→b` inside the box `[lo, hi]`, or a
/// negative value when the segment misses it.
fn clipped_length(a: Vec3<f64>, b: Vec3<f64>, lo: [f64; 3], hi: [f64; 3]) -> f64 {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..3 {
        if d[k] == 0.0 {
            if a[k] < lo[k] || a[k] > hi[k] {
                return -1.0;
            }
            continue;
        }
        let (ta, tb) = ((lo[k] - a[k]) / d[k], (hi[k] - a[k]) / d[k]);
        t0 = t0.max(ta.min(tb));
        t1 = t1.min(ta.max(tb));
    }
    (t1 - t0) * d.norm()
}

fn traversal_completeness() -> Outcome {
    let n = 32;
    let vox = 0.15;
    let spec = cube_spec(n, vox);
    let ext = n as f64 * vox;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut missing, mut spurious, mut repeated, mut sample_misses) = (0, 0, 0, 0);
    let mut visited_total = 0;
    for _ in 0..1000 {
        let a = random_vec(&mut rng, -0.2 * ext, 1.2 * ext);
        let b = random_vec(&mut rng, -0.2 * ext, 1.2 * ext);
        let walk: Vec<VoxelCoord> = VoxelWalker::new(&spec, &Ray::between(a, b).unwrap())
            .map(|(c, _)| c)
            .collect();
        let set: HashSet<VoxelCoord> = walk.iter().copied().collect();
        repeated += walk.len() - set.len();
        visited_total += set.len();

        // Exact intersection lengths over the segment's bounding box.
        let lo = [0, 1, 2].map(|k| ((a[k].min(b[k]) / vox).floor() as i64).clamp(0, n as i64 - 1));
        let hi = [0, 1, 2].map(|k| ((a[k].max(b[k]) / vox).floor() as i64).clamp(0, n as i64 - 1));
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                for x in lo[0]..=hi[0] {
                    let c = VoxelCoord::new(x, y, z);
                    let len = clipped_length(
                        a,
                        b,
                        [x, y, z].map(|v| v as f64 * vox),
                        [x, y, z].map(|v| (v + 1) as f64 * vox),
                    );
                    let inside = set.contains(&c);
                    if len > 1e-9 * vox && !inside {
                        missing += 1;
                    }
                    if inside && len < -1e-9 * vox {
                        spurious += 1;
                    }
                }
            }
        }
        for c in &set {
            if !spec.contains(*c) {
                spurious += 1;
            }
        }

        // Supersampling: every sampled point's voxel is on the walk.
        let samples = 1000.max((20.0 * (b - a).norm() / vox) as usize);
        for k in 0..samples {
            let p = a + (b - a).scale((k as f64 + 0.5) / samples as f64);
            let c = VoxelCoord::new(
                (p.x / vox).floor() as i64,
                (p.y / vox).floor() as i64,
                (p.z / vox).floor() as i64,
            );
            if spec.contains(c) && !set.contains(&c) {
                sample_misses += 1;
            }
        }
    }
    outcome(
        missing + spurious + repeated + sample_misses == 0,
        format!(
            "1000 rays, {visited_total} voxels; missing {missing}, spurious {spurious}, repeated {repeated}, \
             sample misses {sample_misses}"
        ),
    )
}

fn bresenham_subset() -> Outcome {
    let n = 32;
    let spec = cube_spec(n, 0.15);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut violations, mut strict, mut extra) = (0, 0, 0);
    for _ in 0..1000 {
        let mut coord = || {
            VoxelCoord::new(
                rng.gen_range(0..n as i64),
                rng.gen_range(0..n as i64),
                rng.gen_range(0..n as i64),
            )
        };
        let (va, vb) = loop {
            let (p, q) = (coord(), coord());
            if p != q {
                break (p, q);
            }
        };
        let line: HashSet<VoxelCoord> = bresenham_line(va, vb).collect();
        let ray = Ray::between(spec.voxel_center(va), spec.voxel_center(vb)).unwrap();
        let walk: HashSet<VoxelCoord> = VoxelWalker::new(&spec, &ray).map(|(c, _)| c).collect();
        if !line.is_subset(&walk) {
            violations += 1;
        }
        if line.len() < walk.len() {
            strict += 1;
            extra += walk.len() - line.len();
        }
    }
    outcome(
        violations == 0 && strict > 0,
        format!("1000 segments; {violations} not subsets, {strict} strict subsets ({extra} voxels skipped)"),
    )
}

/// Values each ray writes, in ray order, from a fresh per-ray walk.
fn trace_oracle(
    spec: &GridSpec<f64>,
    initial: &VoxelGrid<f64>,
    rays: &[Ray<f64>],
) -> (
    HashMap<VoxelCoord, VoxelState>,
    HashMap<VoxelCoord, HashSet<VoxelState>>,
) {
    let mut last = HashMap::new();
    let mut all: HashMap<VoxelCoord, HashSet<VoxelState>> = HashMap::new();
    for ray in rays {
        let mut value = VoxelState::Free;
        for (c, _) in VoxelWalker::new(spec, ray) {
            if initial.get(c) == Some(VoxelState::Occupied) {
                value = VoxelState::UnknownTraced;
                continue;
            }
            last.insert(c, value);
            all.entry(c).or_default().insert(value);
        }
    }
    (last, all)
}

fn trace_semantics() -> Outcome {
    let n = 32;
    let vox = 0.15;
    let spec = cube_spec(n, vox);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pool = pool();
    let (mut seq_mismatch, mut par_mismatch, mut conflict_violations, mut conflicts) = (0, 0, 0, 0);
    let mut count_mismatch = 0;
    for _ in 0..200 {
        let mut grid = VoxelGrid::new(spec);
        let density = rng.gen_range(0.0..0.05);
        for c in grid.cells_mut() {
            if rng.gen_bool(density) {
                *c = VoxelState::Occupied;
            }
        }
        let pos = random_vec(&mut rng, 8.0 * vox, 24.0 * vox);
        let t_vc = random_pose(&mut rng, pos);
        let bundle = RayBundle::new(
            rng.gen_range(4..24),
            2 * rng.gen_range(0..8) + 1,
            2 * rng.gen_range(0..8) + 1,
        )
        .unwrap();
        let rays = generate_rays(&bundle, &t_vc, vox);
        let (last, all) = trace_oracle(&spec, &grid, &rays);

        let mut seq = grid.clone();
        trace_bundle(&mut seq, &bundle, &t_vc, Parallelism::Sequential);
        let mut par = grid.clone();
        pool.install(|| trace_bundle(&mut par, &bundle, &t_vc, Parallelism::DataParallel));

        let (mut seq_counts, mut par_counts) = ([0usize; 4], [0usize; 4]);
        for i in 0..spec.num_voxels() {
            let c = spec.coord_of(i).unwrap();
            let want_seq = last.get(&c).copied().unwrap_or(grid.cells()[i]);
            if seq.cells()[i] != want_seq {
                seq_mismatch += 1;
            }
            match all.get(&c) {
                Some(values) if values.len() > 1 => {
                    conflicts += 1;
                    if !values.contains(&par.cells()[i]) {
                        conflict_violations += 1;
                    }
                }
                _ => {
                    if par.cells()[i] != want_seq {
                        par_mismatch += 1;
                    }
                    seq_counts[seq.cells()[i] as usize] += 1;
                    par_counts[par.cells()[i] as usize] += 1;
                }
            }
        }
        if seq_counts != par_counts {
            count_mismatch += 1;
        }
    }
    outcome(
        seq_mismatch + par_mismatch + conflict_violations + count_mismatch == 0,
        format!(
            "200 scenes; sequential mismatches {seq_mismatch}, conflict-free parallel mismatches {par_mismatch}, \
             {conflicts} conflict cells with {conflict_violations} invalid values"
        ),
    )
}

fn populate_equivalence() -> Outcome {
    let spec = GridSpec::from_dims([40, 40, 20], 0.1, Vec3::zeros()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let pool = pool();
    let mut differing = 0;
    let mut clipped = 0;
    for case in 0..100 {
        let n = rng.gen_range(0..=50_000);
        // Points spill past every face of the grid.
        let cloud = PointCloud::new((0..n).map(|_| random_vec(&mut rng, -2.8, 2.8)).collect());
        let t_vc = random_pose(&mut rng, Vec3::new(2.0, 2.0, 1.0));
        let cfg = IntegratorConfig { vox_inf: case % 3 };
        let mut seq = VoxelGrid::new(spec);
        let s_stats = populate_occupied(&mut seq, &cloud, &t_vc, cfg, Parallelism::Sequential);
        let mut par = VoxelGrid::new(spec);
        let p_stats = pool.install(|| populate_occupied(&mut par, &cloud, &t_vc, cfg, Parallelism::DataParallel));
        clipped += s_stats.points_out_of_bounds;
        let seq_bytes: Vec<u8> = seq.cells().iter().map(|&c| c as u8).collect();
        let par_bytes: Vec<u8> = par.cells().iter().map(|&c| c as u8).collect();
        if seq_bytes != par_bytes || s_stats != p_stats {
            differing += 1;
        }
    }
    outcome(
        differing == 0 && clipped > 0,
        format!("100 clouds, vox_inf 0-2, {clipped} points outside; {differing} differing grids"),
    )
}

fn merge_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut wrong, mut not_idempotent, mut traced_left) = (0, 0, 0);
    for case in 0..100 {
        let dims = [rng.gen_range(1..24), rng.gen_range(1..24), rng.gen_range(1..12)];
        let spec = GridSpec::from_dims(dims, 0.15, Vec3::new(-1.0, 0.5, 0.0)).unwrap();
        let cells = |rng: &mut ChaCha8Rng| (0..spec.num_voxels()).map(|_| random_state(rng)).collect::<Vec<_>>();
        let local = VoxelGrid::from_cells(spec, cells(&mut rng)).unwrap();
        let ms = VoxelGrid::from_cells(spec, cells(&mut rng)).unwrap();
        let expected: Vec<VoxelState> = local
            .cells()
            .iter()
            .zip(ms.cells())
            .map(|(&l, &m)| match m {
                VoxelState::Unknown => l,
                VoxelState::UnknownTraced => VoxelState::Unknown,
                other => other,
            })
            .collect();
        let mode = if case % 2 == 0 {
            Parallelism::Sequential
        } else {
            Parallelism::DataParallel
        };
        let mut merged = local.clone();
        merge_grids(&mut merged, &ms, mode).unwrap();
        if merged.cells() != expected.as_slice() {
            wrong += 1;
        }
        let once = merged.clone();
        merge_grids(&mut merged, &ms, mode).unwrap();
        if merged != once {
            not_idempotent += 1;
        }
        if local.count(VoxelState::UnknownTraced) == 0 && merged.count(VoxelState::UnknownTraced) > 0 {
            traced_left += 1;
        }
    }
    outcome(
        wrong + not_idempotent + traced_left == 0,
        format!("100 pairs; {wrong} oracle mismatches, {not_idempotent} not idempotent"),
    )
}

fn standard() -> PipelineConfig<f64> {
    PipelineConfig::standard()
}

fn bundle_geometry() -> Outcome {
    let cfg = standard();
    let dims = cfg.grid.dims();
    let nominal = [15.0, 15.0, 3.0].map(|s: f64| s / 0.15);
    let dims_ok = (0..3).all(|k| (dims[k] as f64 - nominal[k]).abs() <= 1.0);
    let b = bundle_dimensions(&cfg.camera, cfg.depth, cfg.grid.vox_size()).unwrap();
    let pass = dims_ok
        && b.vox_depth() == 43
        && (8_000..=9_000).contains(&b.ray_count())
        && b.vox_width() % 2 == 1
        && b.vox_height() % 2 == 1;
    outcome(
        pass,
        format!(
            "dims {:?} = {} voxels, vox_depth {}, {}x{} = {} rays",
            dims,
            cfg.grid.num_voxels(),
            b.vox_depth(),
            b.vox_width(),
            b.vox_height(),
            b.ray_count()
        ),
    )
}

fn ray_economy() -> Outcome {
    let cfg = standard();
    let b = bundle_dimensions(&cfg.camera, cfg.depth, cfg.grid.vox_size()).unwrap();
    let pixels = cfg.camera.width() * cfg.camera.height();
    outcome(
        b.ray_count() == 8295 && 8 * b.ray_count() <= pixels,
        format!(
            "{} bundled rays vs {} pixels (limit {})",
            b.ray_count(),
            pixels,
            pixels / 8
        ),
    )
}

fn scaling_slopes() -> Outcome {
    use voxgrid_simbench::sweeps::{DEFAULT_GRID_DIMS, DEFAULT_POINT_COUNTS, DEFAULT_RAY_HALF_WIDTHS};
    let cfg = standard();
    let opts = SweepOptions {
        seed: 8,
        ..Default::default()
    };
    let slopes = [
        (
            "populate",
            sweep_points_benchmark(&cfg, &DEFAULT_POINT_COUNTS, &opts).unwrap(),
        ),
        (
            "trace",
            sweep_rays_benchmark(&cfg, &DEFAULT_RAY_HALF_WIDTHS, &opts).unwrap(),
        ),
        (
            "merge",
            sweep_voxels_benchmark(&cfg, &DEFAULT_GRID_DIMS, &opts).unwrap(),
        ),
    ]
    .map(|(step, report)| (step, top_decade_slope(&report.medians(step)).unwrap_or(f64::NAN)));
    let pass = slopes.iter().all(|(_, s)| (0.7..=1.3).contains(s));
    let detail = slopes.map(|(step, s)| format!("{step} {s:.2}")).join(", ");
    outcome(pass, format!("top-decade log-log slopes: {detail}"))
}

fn conservativeness(scene: &Scene) -> Outcome {
    let cmp = compare_methods(&standard(), scene, &Trajectory::sweep(10)).unwrap();
    let a = &cmp.agreement;
    outcome(
        a.occupied_sets_equal() && a.bundled_free() <= a.per_pixel_free(),
        format!(
            "10 frames; free bundled {} vs per-pixel {} (ratio {:.3}), occupied sets equal: {}",
            a.bundled_free(),
            a.per_pixel_free(),
            a.free_ratio(),
            a.occupied_sets_equal()
        ),
    )
}

fn conservative_box_field() -> Outcome {
    conservativeness(&Scene::box_field(1, 12))
}

fn conservative_wall() -> Outcome {
    conservativeness(&Scene::wall())
}

/// Median trace time of each tracer over several frames, the two tracers
/// alternating so that host noise hits both alike.
fn trace_medians(scene: &Scene, frames: usize, iterations: usize) -> (f64, f64) {
    let cfg = standard();
    let bundle = bundle_dimensions(&cfg.camera, cfg.depth, cfg.grid.vox_size()).unwrap();
    let (mut bundled, mut per_pixel) = (Vec::new(), Vec::new());
    for pose in Trajectory::sweep(frames).poses {
        let cloud = depth_to_cloud(&render_depth(scene, &pose, &cfg.camera), &cfg.camera).unwrap();
        let spec = cfg.grid.recentered(pose.translation());
        let t_vc = camera_to_grid_transform(&pose, spec.origin());
        let mut base = VoxelGrid::new(spec);
        populate_occupied(&mut base, &cloud, &t_vc, cfg.integrator, Parallelism::Sequential);
        let (mut a, mut b) = (base.clone(), base.clone());
        for k in 0..iterations + 5 {
            a.cells_mut().copy_from_slice(base.cells());
            let t = Instant::now();
            std::hint::black_box(trace_bundle(&mut a, &bundle, &t_vc, Parallelism::Sequential));
            let tb = t.elapsed().as_secs_f64();
            b.cells_mut().copy_from_slice(base.cells());
            let t = Instant::now();
            std::hint::black_box(bresenham_trace_image(&mut b, &cloud, &t_vc, Parallelism::Sequential));
            let tp = t.elapsed().as_secs_f64();
            if k >= 5 {
                bundled.push(tb);
                per_pixel.push(tp);
            }
        }
    }
    let median = |mut v: Vec<f64>| {
        v.sort_by(f64::total_cmp);
        v[v.len() / 2] * 1e6
    };
    (median(bundled), median(per_pixel))
}

fn trace_speedup() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, scene) in [("wall", Scene::wall()), ("box field", Scene::box_field(1, 12))] {
        let (b, p) = trace_medians(&scene, 5, 50);
        let ratio = p / b;
        pass &= ratio >= 3.0;
        parts.push(format!("{name} {b:.0} us vs {p:.0} us = {ratio:.2}x"));
    }
    outcome(pass, format!("sequential, bundled vs per-pixel: {}", parts.join("; ")))
}

fn shift_correctness() -> Outcome {
    let n = 16i64;
    let vox = 0.15;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut overlap_bad, mut fresh_bad, mut round_trip_bad, mut origin_bad) = (0, 0, 0, 0);
    for _ in 0..1000 {
        let spec = GridSpec::from_dims([16; 3], vox, random_vec(&mut rng, -2.0, 2.0)).unwrap();
        let grid =
            VoxelGrid::from_cells(spec, (0..spec.num_voxels()).map(|_| random_state(&mut rng)).collect()).unwrap();
        let shift = [0; 3].map(|_| rng.gen_range(-18..=18));
        let inside = |c: VoxelCoord| (0..3).all(|k| (0..n).contains(&c.to_array()[k]));
        let mut moved = grid.clone();
        moved.shift_by_voxels(shift);
        let expected_origin = spec.origin() + Vec3::new(shift[0] as f64, shift[1] as f64, shift[2] as f64).scale(vox);
        if (moved.spec().origin() - expected_origin).norm() > 1e-9 {
            origin_bad += 1;
        }
        let mut back = moved.clone();
        back.shift_by_voxels(shift.map(|s| -s));
        for i in 0..spec.num_voxels() {
            let c = spec.coord_of(i).unwrap();
            let src = c.offset(shift[0], shift[1], shift[2]);
            let got = moved.cells()[i];
            if inside(src) {
                if got != grid.get(src).unwrap() {
                    overlap_bad += 1;
                }
            } else if got != VoxelState::Unknown {
                fresh_bad += 1;
            }
            // After shifting back only cells that survived both moves remain.
            let via = c.offset(-shift[0], -shift[1], -shift[2]);
            let want = if inside(via) {
                grid.cells()[i]
            } else {
                VoxelState::Unknown
            };
            if back.cells()[i] != want {
                round_trip_bad += 1;
            }
        }
        if (back.spec().origin() - spec.origin()).norm() > 1e-9 {
            origin_bad += 1;
        }
    }
    outcome(
        overlap_bad + fresh_bad + round_trip_bad + origin_bad == 0,
        format!(
            "1000 cases on 16^3; overlap {overlap_bad}, new region {fresh_bad}, round trip {round_trip_bad}, \
             origin {origin_bad} mismatches"
        ),
    )
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(name: &str, grid: &VoxelGrid<f64>) -> Result<bool, String> {
    let path = golden_path(name);
    if std::env::var("VOXGRID_UPDATE_GOLDEN").is_ok_and(|v| v == "1") {
        let f = std::fs::File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        write_dump(grid, std::io::BufWriter::new(f)).map_err(|e| e.to_string())?;
        return Ok(true);
    }
    let f = std::fs::File::open(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let golden: VoxelGrid<f64> = read_dump(f).map_err(|e| e.to_string())?;
    Ok(&golden == grid)
}

fn receding_obstacle() -> Outcome {
    let cfg = PipelineConfig {
        parallelism: Parallelism::Sequential,
        ..standard()
    };
    let pose = camera_pose(Vec3::zeros(), 0.0);
    let mut mapper = LocalMapper::new(cfg, Vec3::zeros()).unwrap();
    let mut snapshots = Vec::new();
    for k in 0..2 {
        let img = render_depth(&Scene::receding_obstacle(k), &pose, &cfg.camera);
        mapper.integrate(&MeasurementFrame::from_depth(img, pose)).unwrap();
        snapshots.push(mapper.local_grid().clone());
    }
    let spec = *snapshots[1].spec();
    let region = |x: (f64, f64)| {
        let lo = spec.world_point_to_voxel(Vec3::new(x.0, -0.3, -0.3)).unwrap();
        let hi = spec.world_point_to_voxel(Vec3::new(x.1, 0.3, 0.3)).unwrap();
        let mut out = Vec::new();
        for z in lo.z..=hi.z {
            for y in lo.y..=hi.y {
                for x in lo.x..=hi.x {
                    out.push(VoxelCoord::new(x, y, z));
                }
            }
        }
        out
    };
    let all = |g: &VoxelGrid<f64>, cells: &[VoxelCoord], s: VoxelState| cells.iter().all(|&c| g.get(c) == Some(s));
    // Shadow of the first panel that stays clear of the second one.
    let shadow = region((2.11, 2.54));
    // Front face of the first panel.
    let vacated = region((1.51, 1.64));
    let transitions = all(&snapshots[0], &shadow, VoxelState::Unknown)
        && all(&snapshots[1], &shadow, VoxelState::Free)
        && all(&snapshots[0], &vacated, VoxelState::Occupied)
        && all(&snapshots[1], &vacated, VoxelState::Free);
    let golden = ["receding_k0.vgd", "receding_k1.vgd"]
        .iter()
        .zip(&snapshots)
        .map(|(name, g)| check_golden(name, g))
        .collect::<Result<Vec<bool>, String>>();
    match golden {
        Ok(matches) => outcome(
            transitions && matches.iter().all(|&m| m),
            format!(
                "{} shadow and {} vacated voxels; transitions ok: {transitions}; golden matches: {matches:?}",
                shadow.len(),
                vacated.len()
            ),
        ),
        Err(e) => outcome(false, format!("golden grid unavailable: {e}")),
    }
}
