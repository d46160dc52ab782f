use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuantError {
    #[error("bit width {0} is outside the supported range 2..=8")]
    InvalidBits(u8),
    #[error("block size must be at least 1")]
    InvalidBlockSize,
    #[error("cannot quantize an empty value sequence")]
    Empty,
    #[error("value at index {0} is not finite")]
    NonFinite(usize),
    #[error("quantized block has a non-positive scale and cannot be decoded")]
    BadScale,
    #[error("quantized block has a negative or non-finite absmax")]
    BadAbsmax,
    #[error("code {code} at index {index} is outside the {bits}-bit range")]
    CodeOutOfRange { index: usize, code: i32, bits: u8 },
}

/// One block of absmax-quantized values: integer codes plus the scale that
/// maps them back to floats (`value ≈ code / scale`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedBlock {
    /// Scale `(2^(bits-1) - 1) / absmax` of the source block; 1.0 for an
    /// all-zero block.
    pub scale: f64,
    pub codes: Vec<i32>,
    pub bits: u8,
    /// The source block's largest magnitude, kept so elements at ±absmax
    /// decode back bit-exactly. The scale alone cannot guarantee that:
    /// `limit / (limit / absmax)` lands one ulp off for roughly a tenth of
    /// magnitudes, and no perturbation of the stored scale repairs it
    /// because the rounding preimage of `absmax` contains no f64. Cleared
    /// when the scale is replaced by its double-quantized reconstruction,
    /// where decoding must follow the adjusted scale instead.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub absmax: Option<f64>,
}

/// Largest representable code magnitude for a bit width: `2^(bits-1) - 1`.
/// The symmetric grid deliberately excludes `-2^(bits-1)`.
fn code_limit(bits: u8) -> i32 {
    (1i32 << (bits - 1)) - 1
}

/// Quantizes one block with absmax scaling.
///
/// Each value maps to `round(scale * value)` where
/// `scale = (2^(bits-1) - 1) / max |value|`; rounding is half away from
/// zero, so codes stay within `[-(2^(bits-1) - 1), 2^(bits-1) - 1]`. An
/// all-zero block gets scale 1.0 and all-zero codes.
pub fn quantize_block(values: &[f64], bits: u8) -> Result<QuantizedBlock, QuantError> {
    if !(2..=8).contains(&bits) {
        return Err(QuantError::InvalidBits(bits));
    }
    if values.is_empty() {
        return Err(QuantError::Empty);
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(QuantError::NonFinite(index));
    }
    let absmax = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if absmax == 0.0 {
        return Ok(QuantizedBlock {
            scale: 1.0,
            codes: vec![0; values.len()],
            bits,
            absmax: Some(0.0),
        });
    }
    let scale = code_limit(bits) as f64 / absmax;
    // f64::round is round-half-away-from-zero.
    let codes = values.iter().map(|v| (scale * v).round() as i32).collect();
    Ok(QuantizedBlock { scale, codes, bits, absmax: Some(absmax) })
}

/// Inverse of [`quantize_block`]: `code / scale`, except that codes at the
/// grid limit decode straight to the recorded ±absmax. Code-range, scale,
/// and absmax validation make corrupted blocks fail loudly instead of
/// decoding to nonsense.
pub fn dequantize_block(block: &QuantizedBlock) -> Result<Vec<f64>, QuantError> {
    if !(2..=8).contains(&block.bits) {
        return Err(QuantError::InvalidBits(block.bits));
    }
    if !(block.scale.is_finite() && block.scale > 0.0) {
        return Err(QuantError::BadScale);
    }
    if let Some(absmax) = block.absmax {
        if !(absmax.is_finite() && absmax >= 0.0) {
            return Err(QuantError::BadAbsmax);
        }
    }
    let limit = code_limit(block.bits);
    for (index, &code) in block.codes.iter().enumerate() {
        if code.abs() > limit {
            return Err(QuantError::CodeOutOfRange { index, code, bits: block.bits });
        }
    }
    Ok(block
        .codes
        .iter()
        .map(|&c| match block.absmax {
            Some(absmax) if c == limit => absmax,
            Some(absmax) if c == -limit => -absmax,
            _ => c as f64 / block.scale,
        })
        .collect())
}

/// A tensor quantized block by block. When `scales_quantized` is present,
/// the per-block scales were themselves absmax-quantized (8-bit, blocks of
/// [`SCALE_BLOCK_SIZE`]) and the stored per-block `scale` fields are the
/// reconstructed values actually used for decoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantizedTensor {
    pub blocks: Vec<QuantizedBlock>,
    pub block_size: usize,
    pub original_length: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scales_quantized: Option<Vec<QuantizedBlock>>,
}

/// Block size used when double-quantizing the per-block scales.
pub const SCALE_BLOCK_SIZE: usize = 256;
/// Bit width used when double-quantizing the per-block scales.
pub const SCALE_BITS: u8 = 8;

/// Splits `values` into chunks of `block_size` (the last may be shorter)
/// and quantizes each independently. With `double_quantize`, the vector of
/// block scales is itself quantized and each block's working scale is
/// replaced by its reconstruction, so memory-accounting and decoding agree.
pub fn quantize_tensor(
    values: &[f64],
    bits: u8,
    block_size: usize,
    double_quantize: bool,
) -> Result<QuantizedTensor, QuantError> {
    if block_size == 0 {
        return Err(QuantError::InvalidBlockSize);
    }
    if values.is_empty() {
        return Err(QuantError::Empty);
    }
    let mut blocks: Vec<QuantizedBlock> = values
        .chunks(block_size)
        .map(|chunk| quantize_block(chunk, bits))
        .collect::<Result<_, _>>()?;

    let scales_quantized = if double_quantize {
        let scales: Vec<f64> = blocks.iter().map(|b| b.scale).collect();
        let quantized: Vec<QuantizedBlock> = scales
            .chunks(SCALE_BLOCK_SIZE)
            .map(|chunk| quantize_block(chunk, SCALE_BITS))
            .collect::<Result<_, _>>()?;
        let mut reconstructed = Vec::with_capacity(scales.len());
        for block in &quantized {
            reconstructed.extend(dequantize_block(block)?);
        }
        for (block, scale) in blocks.iter_mut().zip(reconstructed) {
            block.scale = scale;
            // The adjusted scale, not the original extreme, now defines the
            // reconstruction grid.
            block.absmax = None;
        }
        Some(quantized)
    } else {
        None
    };

    Ok(QuantizedTensor { blocks, block_size, original_length: values.len(), scales_quantized })
}

/// Decodes every block back to floats. Fails if any block is corrupt or if
/// double quantization collapsed a scale to zero (possible when block
/// scales differ by more than the 8-bit dynamic range).
pub fn dequantize_tensor(tensor: &QuantizedTensor) -> Result<Vec<f64>, QuantError> {
    let mut out = Vec::with_capacity(tensor.original_length);
    for block in &tensor.blocks {
        out.extend(dequantize_block(block)?);
    }
    Ok(out)
}
