//! Execution mode and the two cell views the kernels write through.
//!
//! Sequential kernels see the grid as `[Cell<VoxelState>]`; data-parallel
//! kernels see the same bytes as `[AtomicU8]`, which makes single-cell
//! writes from many threads well defined.

use std::cell::Cell;
use std::sync::atomic::{AtomicU8, Ordering};

use serde::{Deserialize, Serialize};

use crate::grid::VoxelState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parallelism {
    #[default]
    Sequential,
    DataParallel,
}

impl std::str::FromStr for Parallelism {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sequential" => Ok(Self::Sequential),
            "data_parallel" | "parallel" => Ok(Self::DataParallel),
            other => Err(format!("unknown parallelism `{other}`")),
        }
    }
}

pub(crate) trait CellStore {
    fn load(&self, idx: usize) -> VoxelState;
    fn store(&self, idx: usize, state: VoxelState);
}

impl CellStore for [Cell<VoxelState>] {
    #[inline]
    fn load(&self, idx: usize) -> VoxelState {
        self[idx].get()
    }

    #[inline]
    fn store(&self, idx: usize, state: VoxelState) {
        self[idx].set(state)
    }
}

impl CellStore for [AtomicU8] {
    #[inline]
    fn load(&self, idx: usize) -> VoxelState {
        VoxelState::from_byte(self[idx].load(Ordering::Relaxed)).expect("only valid states are stored")
    }

    #[inline]
    fn store(&self, idx: usize, state: VoxelState) {
        self[idx].store(state as u8, Ordering::Relaxed)
    }
}

pub(crate) fn cell_view(cells: &mut [VoxelState]) -> &[Cell<VoxelState>] {
    Cell::from_mut(cells).as_slice_of_cells()
}

pub(crate) fn atomic_view(cells: &mut [VoxelState]) -> &[AtomicU8] {
    // SAFETY: VoxelState is repr(u8) and AtomicU8 has the size, alignment and
    // bit validity of u8. The exclusive borrow guarantees no non-atomic access
    // overlaps the returned view, and only valid discriminants are stored.
    unsafe { &*(cells as *mut [VoxelState] as *const [AtomicU8]) }
}
