use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exec::Parallelism;
use crate::grid::{VoxelGrid, VoxelState};
use crate::scalar::Real;

#[inline]
fn merge_cell(local: &mut VoxelState, measured: VoxelState) {
    match measured {
        VoxelState::Unknown => {}
        VoxelState::UnknownTraced => *local = VoxelState::Unknown,
        known => *local = known,
    }
}

/// Copies every non-unknown measurement voxel into the local grid.
/// Unknown-and-traced voxels land as plain unknown, so a local grid never
/// holds that state.
pub fn merge_grids<T: Real>(local: &mut VoxelGrid<T>, measured: &VoxelGrid<T>, mode: Parallelism) -> Result<()> {
    if !local.spec().same_layout(measured.spec()) {
        return Err(Error::SpecMismatch(format!(
            "local {:?} at {:?} vs measurement {:?} at {:?}",
            local.spec().dims(),
            local.spec().origin(),
            measured.spec().dims(),
            measured.spec().origin()
        )));
    }
    let ms = measured.cells();
    match mode {
        Parallelism::Sequential => {
            for (l, &m) in local.cells_mut().iter_mut().zip(ms) {
                merge_cell(l, m);
            }
        }
        Parallelism::DataParallel => {
            const CHUNK: usize = 1 << 14;
            local
                .cells_mut()
                .par_chunks_mut(CHUNK)
                .zip(ms.par_chunks(CHUNK))
                .for_each(|(l, m)| {
                    for (l, &m) in l.iter_mut().zip(m) {
                        merge_cell(l, m);
                    }
                });
        }
    }
    Ok(())
}
