//! Reader and writer for the binary planar code format.
//!
//! Each graph is a vertex count followed by, per vertex, its 1-based
//! neighbors in rotation order and a terminating zero. Counts up to 255 use
//! one byte per entry. Larger graphs start with a zero byte and then use
//! little-endian 16-bit entries throughout.

use crate::error::MapError;
use crate::map::PlanarMap;

pub const HEADER: &[u8] = b">>planar_code<<";
pub const HEADER_LE: &[u8] = b">>planar_code le<<";

/// Encodes one simple map without any header.
pub fn encode_graph(map: &PlanarMap) -> Vec<u8> {
    let n = map.n_vertices();
    let mut out = Vec::new();
    if n <= 255 {
        out.push(n as u8);
        for v in 0..n {
            out.extend(map.neighbors(v).map(|w| (w + 1) as u8));
            out.push(0);
        }
    } else {
        out.push(0);
        let mut push = |x: usize| out.extend((x as u16).to_le_bytes());
        push(n);
        for v in 0..n {
            for w in map.neighbors(v) {
                push(w + 1);
            }
            push(0);
        }
    }
    out
}

/// Encodes a stream of maps with the standard header.
pub fn write_planar_code(maps: &[PlanarMap]) -> Vec<u8> {
    let big = maps.iter().any(|m| m.n_vertices() > 255);
    let mut out = if big { HEADER_LE.to_vec() } else { HEADER.to_vec() };
    for m in maps {
        out.extend(encode_graph(m));
    }
    out
}

/// Decodes a planar code stream; the header is optional.
pub fn read_planar_code(bytes: &[u8]) -> Result<Vec<PlanarMap>, MapError> {
    let mut pos = if bytes.starts_with(HEADER_LE) {
        HEADER_LE.len()
    } else if bytes.starts_with(HEADER) {
        HEADER.len()
    } else {
        0
    };
    let mut maps = Vec::new();
    while pos < bytes.len() {
        let (map, used) = decode_graph(&bytes[pos..])?;
        maps.push(map);
        pos += used;
    }
    Ok(maps)
}

/// Decodes one graph, returning the map and the number of bytes consumed.
pub fn decode_graph(bytes: &[u8]) -> Result<(PlanarMap, usize), MapError> {
    let truncated = || MapError::PlanarCode("truncated input".into());
    let first = *bytes.first().ok_or_else(truncated)?;
    let wide = first == 0;
    let mut pos = if wide { 1 } else { 0 };
    let read = |pos: &mut usize| -> Result<usize, MapError> {
        if wide {
            let lo = *bytes.get(*pos).ok_or_else(truncated)?;
            let hi = *bytes.get(*pos + 1).ok_or_else(truncated)?;
            *pos += 2;
            Ok(u16::from_le_bytes([lo, hi]) as usize)
        } else {
            let x = *bytes.get(*pos).ok_or_else(truncated)?;
            *pos += 1;
            Ok(x as usize)
        }
    };
    let n = read(&mut pos)?;
    if n == 0 {
        return Err(MapError::PlanarCode("empty graph".into()));
    }
    let mut adj = vec![Vec::new(); n];
    for list in adj.iter_mut() {
        loop {
            let w = read(&mut pos)?;
            if w == 0 {
                break;
            }
            if w > n {
                return Err(MapError::VertexOutOfRange(w - 1));
            }
            list.push(w - 1);
        }
    }
    Ok((PlanarMap::from_neighbors(&adj)?, pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_pdw() {
        let maps: Vec<_> = [6, 8, 12].iter().map(|&f| PlanarMap::pseudo_double_wheel(f).unwrap()).collect();
        let bytes = write_planar_code(&maps);
        assert!(bytes.starts_with(HEADER));
        let back = read_planar_code(&bytes).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in maps.iter().zip(&back) {
            assert_eq!(a.adjacency(), b.adjacency());
            assert!(a.is_isomorphic(b));
        }
    }

    #[test]
    fn cube_bytes() {
        let m = PlanarMap::pseudo_double_wheel(6).unwrap();
        let enc = encode_graph(&m);
        assert_eq!(enc[0], 8);
        // v0: v5, v1, N
        assert_eq!(&enc[1..5], &[6, 2, 7, 0]);
    }

    #[test]
    fn wide_roundtrip() {
        let m = PlanarMap::pseudo_double_wheel(300).unwrap();
        let bytes = write_planar_code(std::slice::from_ref(&m));
        assert!(bytes.starts_with(HEADER_LE));
        let back = read_planar_code(&bytes).unwrap();
        assert_eq!(back[0].adjacency(), m.adjacency());
    }

    #[test]
    fn truncated_is_error() {
        let m = PlanarMap::pseudo_double_wheel(6).unwrap();
        let enc = encode_graph(&m);
        assert!(decode_graph(&enc[..enc.len() - 3]).is_err());
    }
}
