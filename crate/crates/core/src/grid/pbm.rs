//! Binary PBM (P4) export with a plain-text sidecar.
//!
//! One file per 2-D slice. Row 0 of the image is the highest `i1` index so
//! the picture reads with +y up; bits are packed MSB-first per the PBM
//! specification, giving bit-exact files across platforms.

use super::{Raster, RasterMode};

/// Encodes slice `i2` of the raster as a P4 bitmap.
pub fn encode_pbm(r: &Raster, slice: usize) -> Vec<u8> {
    let w = r.dims()[0];
    let h = r.dims()[1];
    assert!(slice < r.dims()[2], "slice index out of range");
    let mut out = format!("P4\n{w} {h}\n").into_bytes();
    let row_bytes = w.div_ceil(8);
    for row in 0..h {
        let i1 = h - 1 - row;
        let mut bytes = vec![0u8; row_bytes];
        for i0 in 0..w {
            if r.get([i0, i1, slice]) {
                bytes[i0 / 8] |= 0x80 >> (i0 % 8);
            }
        }
        out.extend_from_slice(&bytes);
    }
    out
}

/// Human- and machine-readable metadata for a PBM slice: origin, cell size,
/// extents, mode, slack. Floats carry 17 significant digits.
pub fn sidecar_text(r: &Raster, slice: usize) -> String {
    let mode = match r.mode() {
        RasterMode::Inner => "INNER",
        RasterMode::Outer => "OUTER",
    };
    let origin: Vec<String> = r
        .origin()
        .coords()
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect();
    format!(
        "origin: {}\ndelta: {:.16e}\ndims: {} {} {}\nslice: {}\nmode: {}\nslack: {:.16e}\nrow_order: top_is_max_i1\nbit_order: msb_first\n",
        origin.join(" "),
        r.delta(),
        r.dims()[0],
        r.dims()[1],
        r.dims()[2],
        slice,
        mode,
        r.slack(),
    )
}
