use super::IoError;
use crate::complex::SimplicialComplex;

/// Linear map ℝᴺ → ℝ³ sending `eᵢ` to `(tᵢ, tᵢ², tᵢ³)` with `tᵢ = (i+1)/N`.
/// Any four of these points are affinely independent, so the images of
/// the standard simplex vertices are in general position.
pub fn moment_curve_projection(x: &[f64]) -> [f64; 3] {
    let n = x.len() as f64;
    let mut y = [0.0; 3];
    for (i, c) in x.iter().enumerate() {
        let t = (i + 1) as f64 / n;
        y[0] += c * t;
        y[1] += c * t * t;
        y[2] += c * t * t * t;
    }
    y
}

/// OFF text with every vertex and every 2-simplex, in index order. The edge
/// count on the counts line is the number of 1-simplices. Ambient dimension
/// above 3 requires `project`; lower dimensions are padded with zeros.
pub fn export_off(k: &SimplicialComplex, precision: usize, project: bool) -> Result<String, IoError> {
    let n = k.ambient_dim();
    if n > 3 && !project {
        return Err(IoError::UnsupportedDimension(n));
    }
    let triangles = k.simplices_of_dim(2);
    let edges = k.simplices_of_dim(1).len();
    let mut out = format!("OFF\n{} {} {}\n", k.vertex_count(), triangles.len(), edges);
    for v in k.vertices() {
        let x = v.to_f64();
        let p = if n > 3 {
            moment_curve_projection(&x)
        } else {
            let mut p = [0.0; 3];
            p[..n].copy_from_slice(&x);
            p
        };
        // no "-0" in the output
        let p = p.map(|c| if c == 0.0 { 0.0 } else { c });
        out.push_str(&format!("{:.*} {:.*} {:.*}\n", precision, p[0], precision, p[1], precision, p[2]));
    }
    for t in &triangles {
        let v = t.vertices();
        out.push_str(&format!("3 {} {} {}\n", v[0], v[1], v[2]));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{simplex_boundary, standard_realization};

    #[test]
    fn tetrahedron_boundary() {
        let off = export_off(&simplex_boundary(3), 3, true).unwrap();
        let lines: Vec<&str> = off.lines().collect();
        assert_eq!(lines[0], "OFF");
        assert_eq!(lines[1], "4 4 6");
        assert_eq!(lines.len(), 2 + 4 + 4);
        assert_eq!(lines[6], "3 0 1 2");
        assert!(matches!(export_off(&simplex_boundary(3), 3, false), Err(IoError::UnsupportedDimension(4))));
    }

    #[test]
    fn low_dimensions_are_padded() {
        let k = standard_realization(2, vec![vec![0, 1]]).unwrap();
        assert_eq!(export_off(&k, 1, false).unwrap(), "OFF\n2 0 1\n1.0 0.0 0.0\n0.0 1.0 0.0\n");
    }

    #[test]
    fn projection_separates_simplex_vertices() {
        let images: Vec<[f64; 3]> = (0..5).map(|i| {
            let mut e = [0.0; 5];
            e[i] = 1.0;
            moment_curve_projection(&e)
        }).collect();
        for i in 0..5 {
            for j in i + 1..5 {
                assert!(images[i] != images[j]);
            }
        }
    }
}
