//! Binary network checkpoints.
//!
//! Layout: the magic bytes `RQNET1`, the number of layer sizes as a
//! little-endian `u32`, each layer size as a `u32`, then for every weight
//! layer its row-major weights followed by its biases as little-endian `f64`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::NetworkParams;
use crate::{Error, Result};

pub const MAGIC: &[u8; 6] = b"RQNET1";

/// Serialises `params` to `out`.
pub fn write_checkpoint<W: Write>(params: &NetworkParams, out: &mut W) -> std::io::Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&(params.layer_sizes.len() as u32).to_le_bytes())?;
    for &n in &params.layer_sizes {
        out.write_all(&(n as u32).to_le_bytes())?;
    }
    for l in 0..params.depth() {
        for x in params.weights(l).iter().chain(params.biases(l)) {
            out.write_all(&x.to_le_bytes())?;
        }
    }
    Ok(())
}

fn read_u32<R: Read>(input: &mut R) -> Result<u32> {
    let mut buf = [0u8; 4];
    input
        .read_exact(&mut buf)
        .map_err(|e| Error::Checkpoint(format!("truncated header: {e}")))?;
    Ok(u32::from_le_bytes(buf))
}

fn read_f64s<R: Read>(input: &mut R, n: usize) -> Result<Vec<f64>> {
    let mut buf = [0u8; 8];
    (0..n)
        .map(|_| {
            input
                .read_exact(&mut buf)
                .map_err(|e| Error::Checkpoint(format!("truncated parameters: {e}")))?;
            Ok(f64::from_le_bytes(buf))
        })
        .collect()
}

/// Parses a checkpoint from `input`. Trailing bytes are rejected.
pub fn read_checkpoint<R: Read>(input: &mut R) -> Result<NetworkParams> {
    let mut magic = [0u8; 6];
    input
        .read_exact(&mut magic)
        .map_err(|e| Error::Checkpoint(format!("missing magic: {e}")))?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint(format!("bad magic {magic:?}")));
    }
    let count = read_u32(input)? as usize;
    if !(2..=64).contains(&count) {
        return Err(Error::Checkpoint(format!(
            "implausible layer count {count}"
        )));
    }
    let sizes = (0..count)
        .map(|_| read_u32(input).map(|n| n as usize))
        .collect::<Result<Vec<_>>>()?;
    let mut weights = Vec::with_capacity(count - 1);
    let mut biases = Vec::with_capacity(count - 1);
    for w in sizes.windows(2) {
        weights.push(read_f64s(input, w[0] * w[1])?);
        biases.push(read_f64s(input, w[1])?);
    }
    let mut rest = [0u8; 1];
    match input.read(&mut rest) {
        Ok(0) => {}
        Ok(_) => return Err(Error::Checkpoint("trailing bytes after parameters".into())),
        Err(e) => return Err(Error::Checkpoint(e.to_string())),
    }
    NetworkParams::from_parts(&sizes, weights, biases).map_err(|e| Error::Checkpoint(e.to_string()))
}

pub fn save_checkpoint(params: &NetworkParams, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    write_checkpoint(params, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<NetworkParams> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_checkpoint(&mut BufReader::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;

    #[test]
    fn header_layout() {
        let p = NetworkParams::zeros(&[2, 3, 1]).unwrap();
        let mut bytes = Vec::new();
        write_checkpoint(&p, &mut bytes).unwrap();
        assert_eq!(&bytes[..6], b"RQNET1");
        assert_eq!(&bytes[6..10], &3u32.to_le_bytes());
        assert_eq!(&bytes[10..14], &2u32.to_le_bytes());
        assert_eq!(&bytes[14..18], &3u32.to_le_bytes());
        assert_eq!(&bytes[18..22], &1u32.to_le_bytes());
        assert_eq!(bytes.len(), 22 + 8 * (6 + 3 + 3 + 1));
    }

    #[test]
    fn weights_precede_biases_per_layer() {
        let p = NetworkParams::from_parts(
            &[1, 2, 1],
            vec![vec![1.0, 2.0], vec![3.0, 4.0]],
            vec![vec![5.0, 6.0], vec![7.0]],
        )
        .unwrap();
        let mut bytes = Vec::new();
        write_checkpoint(&p, &mut bytes).unwrap();
        let floats: Vec<f64> = bytes[22..]
            .chunks(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        assert_eq!(floats, vec![1.0, 2.0, 5.0, 6.0, 3.0, 4.0, 7.0]);
    }

    #[test]
    fn round_trip_is_bitwise() {
        let mut rng = seeded_rng(9);
        let p = NetworkParams::he_uniform(&[8, 20, 6, 4], &mut rng).unwrap();
        let mut bytes = Vec::new();
        write_checkpoint(&p, &mut bytes).unwrap();
        let q = read_checkpoint(&mut bytes.as_slice()).unwrap();
        assert!(p.bitwise_eq(&q));
    }

    #[test]
    fn rejects_corruption() {
        let p = NetworkParams::zeros(&[2, 2]).unwrap();
        let mut bytes = Vec::new();
        write_checkpoint(&p, &mut bytes).unwrap();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(read_checkpoint(&mut bad.as_slice()).is_err());
        assert!(read_checkpoint(&mut &bytes[..bytes.len() - 1]).is_err());
        let mut long = bytes.clone();
        long.push(0);
        assert!(read_checkpoint(&mut long.as_slice()).is_err());
    }
}
