use super::{VoxelGrid, VoxelState};
use crate::error::{Error, Result};
use crate::math::Vec3;
use crate::scalar::Real;

/// Sub-voxel slack when quantizing a displacement, in voxel units.
const QUANTIZE_EPS: f64 = 1e-6;

impl<T: Real> VoxelGrid<T> {
    /// Recenters the grid on `new_center` in whole-voxel steps.
    ///
    /// An axis shifts only once the center has drifted by at least one voxel
    /// along it; the shift is the displacement truncated toward zero. Voxels
    /// present in both extents keep their state, newly exposed ones are
    /// unknown. Returns the applied shift in voxels.
    pub fn shift_grid(&mut self, new_center: Vec3<T>) -> Result<[i64; 3]> {
        if !new_center.is_finite() {
            return Err(Error::NonFinite);
        }
        let delta = (new_center - self.spec.center()).scale(T::one() / self.spec.vox_size);
        let eps = T::lit(QUANTIZE_EPS);
        let mut shift = [0i64; 3];
        for (axis, s) in shift.iter_mut().enumerate() {
            let d = delta[axis];
            let steps = (d.abs() + eps).floor();
            *s = steps.to_i64().unwrap_or(i64::MAX) * if d < T::zero() { -1 } else { 1 };
        }
        self.shift_by_voxels(shift);
        Ok(shift)
    }

    /// Translates the grid by `shift` voxels: afterwards voxel `c` holds what
    /// voxel `c + shift` held before, and the origin moves by `shift·vox_size`.
    pub fn shift_by_voxels(&mut self, shift: [i64; 3]) {
        if shift == [0, 0, 0] {
            return;
        }
        let [dx, dy, dz] = self.spec.dims();
        let mut out = vec![VoxelState::Unknown; self.cells.len()];

        let overlaps = shift
            .iter()
            .zip([dx, dy, dz])
            .all(|(&s, d)| s.unsigned_abs() < d as u64);
        if overlaps {
            let [sx, sy, sz] = shift;
            // Destination x-range whose source x lies inside the grid.
            let x_lo = (-sx).max(0) as usize;
            let x_hi = (dx as i64 - sx).min(dx as i64) as usize;
            for z in 0..dz as i64 {
                let src_z = z + sz;
                if src_z < 0 || src_z >= dz as i64 {
                    continue;
                }
                for y in 0..dy as i64 {
                    let src_y = y + sy;
                    if src_y < 0 || src_y >= dy as i64 {
                        continue;
                    }
                    let dst_row = (y as usize + dy * z as usize) * dx;
                    let src_row = (src_y as usize + dy * src_z as usize) * dx;
                    let src_lo = (x_lo as i64 + sx) as usize;
                    let len = x_hi - x_lo;
                    out[dst_row + x_lo..dst_row + x_lo + len]
                        .copy_from_slice(&self.cells[src_row + src_lo..src_row + src_lo + len]);
                }
            }
        }

        let vox = self.spec.vox_size;
        let step = Vec3::new(
            T::from_i64(shift[0]).unwrap() * vox,
            T::from_i64(shift[1]).unwrap() * vox,
            T::from_i64(shift[2]).unwrap() * vox,
        );
        self.spec = self.spec.with_origin(self.spec.origin + step);
        self.cells = out;
    }
}
