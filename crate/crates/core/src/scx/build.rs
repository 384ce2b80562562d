use super::Complex;

/// Δⁿ on vertices `0..=n`.
pub fn simplex(n: usize) -> Complex {
    let labels = (0..=n).map(|i| i.to_string()).collect();
    Complex::new(labels, &[(0..=n as u32).collect()]).expect("valid simplex")
}

/// ∂Δⁿ on vertices `0..=n`.
pub fn boundary_of_simplex(n: usize) -> Complex {
    let labels = (0..=n).map(|i| i.to_string()).collect();
    let facets: Vec<Vec<u32>> = (0..=n as u32).map(|skip| (0..=n as u32).filter(|&v| v != skip).collect()).collect();
    Complex::new(labels, &facets).expect("valid boundary")
}

/// Cone on `k` with a new last vertex labelled `apex`.
pub fn cone(k: &Complex, apex: &str) -> Complex {
    let mut labels = k.labels();
    let a = labels.len() as u32;
    labels.push(apex.to_string());
    let mut maximal: Vec<Vec<u32>> = Vec::new();
    for i in k.maximal_simplices() {
        let mut s = k.simplex(i).to_vec();
        s.push(a);
        maximal.push(s);
    }
    if k.is_empty() {
        maximal.push(vec![a]);
    }
    Complex::new(labels, &maximal).expect("valid cone")
}

/// Unreduced suspension with apexes `north`, `south` appended.
pub fn suspension(k: &Complex, north: &str, south: &str) -> Complex {
    let mut labels = k.labels();
    let n = labels.len() as u32;
    labels.push(north.to_string());
    labels.push(south.to_string());
    let mut maximal: Vec<Vec<u32>> = Vec::new();
    for i in k.maximal_simplices() {
        for apex in [n, n + 1] {
            let mut s = k.simplex(i).to_vec();
            s.push(apex);
            maximal.push(s);
        }
    }
    Complex::new(labels, &maximal).expect("valid suspension")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cone_and_suspension_counts() {
        let c = cone(&boundary_of_simplex(2), "c");
        assert_eq!(c.f_vector(), vec![4, 6, 3]);
        assert_eq!(c.betti(), vec![1, 0, 0]);
        let s = suspension(&boundary_of_simplex(2), "n", "s");
        assert_eq!(s.f_vector(), vec![5, 9, 6]);
        assert_eq!(s.betti(), vec![1, 0, 1]);
    }
}
