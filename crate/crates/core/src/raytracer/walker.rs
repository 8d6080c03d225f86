use crate::error::{Error, Result};
use crate::grid::{GridSpec, VoxelCoord};
use crate::math::Vec3;
use crate::scalar::Real;

/// Segment to trace, in grid-frame meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray<T> {
    start: Vec3<T>,
    dir: Vec3<T>,
    max_dist: T,
}

impl<T: Real> Ray<T> {
    /// `dir` need not be normalized; `max_dist` is measured in meters along it.
    pub fn new(start: Vec3<T>, dir: Vec3<T>, max_dist: T) -> Result<Self> {
        if !start.is_finite() || !dir.is_finite() || !max_dist.is_finite() {
            return Err(Error::InvalidRay("non-finite component".into()));
        }
        if dir == Vec3::zeros() {
            return Err(Error::InvalidRay("zero direction".into()));
        }
        if !(max_dist > T::zero()) {
            return Err(Error::InvalidRay(format!("max_dist must be positive, got {max_dist}")));
        }
        Ok(Self { start, dir, max_dist })
    }

    /// Segment from `a` to `b`.
    pub fn between(a: Vec3<T>, b: Vec3<T>) -> Result<Self> {
        let d = b - a;
        Self::new(a, d, d.norm())
    }

    #[inline]
    pub fn start(&self) -> Vec3<T> {
        self.start
    }
    #[inline]
    pub fn dir(&self) -> Vec3<T> {
        self.dir
    }
    #[inline]
    pub fn max_dist(&self) -> T {
        self.max_dist
    }

    /// Point at distance `t` meters from the start.
    pub fn at(&self, t: T) -> Vec3<T> {
        self.start + self.dir.scale(t / self.dir.norm())
    }
}

/// Amanatides–Woo traversal of the voxels a ray segment passes through,
/// clipped to the grid.
///
/// Yields `(voxel, t_enter)` in order, `t_enter` in meters from the ray
/// start. The first voxel is the one containing the (clipped) start point.
/// When two boundaries are crossed at the same `t` the axis with the lower
/// index steps first.
#[derive(Debug, Clone)]
pub struct VoxelWalker<T> {
    cur: [i64; 3],
    step: [i64; 3],
    /// Steps left along each axis before leaving the grid.
    left: [i64; 3],
    // Parametric values below are in voxel units.
    next_t: [T; 3],
    delta_t: [T; 3],
    t_cur: T,
    t_end: T,
    vox: T,
    /// Voxels the unclipped segment crosses.
    span: usize,
    done: bool,
}

impl<T: Real> VoxelWalker<T> {
    pub fn new(spec: &GridSpec<T>, ray: &Ray<T>) -> Self {
        Self::from_parts(spec, ray.start, ray.dir, ray.max_dist)
    }

    /// Same as [`new`](Self::new) without building a validated [`Ray`].
    #[inline]
    pub(crate) fn from_parts(spec: &GridSpec<T>, start: Vec3<T>, dir: Vec3<T>, max_dist: T) -> Self {
        let vox = spec.vox_size();
        let dims = spec.dims().map(|d| d as i64);
        let u = dir.scale(T::one() / dir.norm());
        let p = start.scale(T::one() / vox);
        let len = max_dist / vox;
        let end = p + u.scale(len);
        let span = (0..3)
            .map(|a| usize::try_from(end[a].floor_i64().abs_diff(p[a].floor_i64())).unwrap_or(usize::MAX))
            .fold(1usize, usize::saturating_add);

        let mut walker = Self {
            cur: [0; 3],
            step: [0; 3],
            left: [i64::MAX; 3],
            next_t: [T::infinity(); 3],
            delta_t: [T::infinity(); 3],
            t_cur: T::zero(),
            t_end: T::zero(),
            vox,
            span,
            done: true,
        };

        // Slab clip of [0, len] against [0, dims].
        let mut inv_dir = [T::infinity(); 3];
        let (mut t0, mut t1) = (T::zero(), len);
        for a in 0..3 {
            let hi = T::from_i64(dims[a]).unwrap();
            if u[a] == T::zero() {
                if p[a] < T::zero() || p[a] > hi {
                    return walker;
                }
                continue;
            }
            let inv = T::one() / u[a];
            let (ta, tb) = ((T::zero() - p[a]) * inv, (hi - p[a]) * inv);
            t0 = t0.max(ta.min(tb));
            t1 = t1.min(ta.max(tb));
            inv_dir[a] = inv;
            walker.step[a] = if u[a] > T::zero() { 1 } else { -1 };
        }
        if t0 > t1 {
            return walker;
        }

        let entry = p + u.scale(t0);
        for a in 0..3 {
            let f = entry[a].floor_i64();
            if t0 == t1 && (f < 0 || f >= dims[a]) {
                return walker; // only grazes the grid boundary
            }
            let c = f.clamp(0, dims[a] - 1);
            walker.cur[a] = c;
            match walker.step[a] {
                0 => {}
                s => {
                    let boundary = if s > 0 { c + 1 } else { c };
                    walker.next_t[a] = (T::from_i64(boundary).unwrap() - p[a]) * inv_dir[a];
                    walker.delta_t[a] = inv_dir[a].abs();
                    walker.left[a] = if s > 0 { dims[a] - 1 - c } else { c };
                }
            }
        }
        walker.t_cur = t0;
        walker.t_end = t1;
        walker.done = false;
        walker
    }

    #[inline]
    pub(crate) fn unclipped_span(&self) -> usize {
        self.span
    }

    /// Crosses the nearest boundary and returns its axis, or `None` once the
    /// segment ends or leaves the grid.
    #[inline(always)]
    fn advance(&mut self) -> Option<usize> {
        // Branch-free argmin, lower axis on ties.
        let nt = &self.next_t;
        let xy = (nt[1] < nt[0]) as usize;
        let z = (nt[2] < nt[xy]) as usize;
        let axis = xy + z * (2 - xy);
        let t = nt[axis];
        if t >= self.t_end || self.left[axis] == 0 {
            self.done = true;
            return None;
        }
        self.left[axis] -= 1;
        self.next_t[axis] = t + self.delta_t[axis];
        self.t_cur = t;
        Some(axis)
    }

    /// Calls `f` with the linear index of every voxel on the walk. Same
    /// sequence as the iterator, with the state kept in locals.
    #[inline]
    pub(crate) fn for_each_index(self, spec: &GridSpec<T>, mut f: impl FnMut(usize)) {
        if self.done {
            return;
        }
        let [dx, dy, _] = spec.dims();
        let sx = self.step[0] as isize;
        let sy = self.step[1] as isize * dx as isize;
        let sz = self.step[2] as isize * (dx * dy) as isize;
        let [mut tx, mut ty, mut tz] = self.next_t;
        let [ddx, ddy, ddz] = self.delta_t;
        let [mut lx, mut ly, mut lz] = self.left;
        let t_end = self.t_end;
        let mut idx = spec.index_unchecked(VoxelCoord::from_array(self.cur));
        loop {
            f(idx);
            if tx <= ty && tx <= tz {
                if tx >= t_end || lx == 0 {
                    return;
                }
                lx -= 1;
                tx = tx + ddx;
                idx = idx.wrapping_add_signed(sx);
            } else if ty <= tz {
                if ty >= t_end || ly == 0 {
                    return;
                }
                ly -= 1;
                ty = ty + ddy;
                idx = idx.wrapping_add_signed(sy);
            } else {
                if tz >= t_end || lz == 0 {
                    return;
                }
                lz -= 1;
                tz = tz + ddz;
                idx = idx.wrapping_add_signed(sz);
            }
        }
    }
}

impl<T: Real> Iterator for VoxelWalker<T> {
    type Item = (VoxelCoord, T);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let out = (VoxelCoord::from_array(self.cur), self.t_cur * self.vox);
        if let Some(a) = self.advance() {
            self.cur[a] += self.step[a];
        }
        Some(out)
    }
}
