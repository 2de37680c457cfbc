//! Layer mapping of symbol streams.

use super::St2dError;

/// Parallel mapping: stream `s` goes to layer `s`.
pub fn map_parallel<T: Clone>(streams: &[Vec<T>], layers: usize) -> Result<Vec<Vec<T>>, St2dError> {
    if streams.len() != layers {
        return Err(St2dError::Dimension(format!(
            "parallel mapping needs one stream per layer ({} streams, {layers} layers)",
            streams.len()
        )));
    }
    Ok(streams.to_vec())
}

/// Inverse of [`map_parallel`].
pub fn demap_parallel<T: Clone>(layers: &[Vec<T>]) -> Vec<Vec<T>> {
    layers.to_vec()
}

/// Folded mapping: symbol `i` goes to layer `i mod L` at position `⌊i/L⌋`.
pub fn map_folded<T: Clone>(stream: &[T], layers: usize) -> Result<Vec<Vec<T>>, St2dError> {
    if layers == 0 || stream.len() % layers != 0 {
        return Err(St2dError::Dimension(format!(
            "stream of {} symbols does not fold onto {layers} layers",
            stream.len()
        )));
    }
    Ok((0..layers)
        .map(|l| stream.iter().skip(l).step_by(layers).cloned().collect())
        .collect())
}

/// Inverse of [`map_folded`].
pub fn demap_folded<T: Clone>(layers: &[Vec<T>]) -> Result<Vec<T>, St2dError> {
    let width = layers.first().map_or(0, Vec::len);
    if layers.iter().any(|l| l.len() != width) {
        return Err(St2dError::Dimension("layers of unequal length".into()));
    }
    Ok((0..width)
        .flat_map(|m| layers.iter().map(move |l| l[m].clone()))
        .collect())
}
