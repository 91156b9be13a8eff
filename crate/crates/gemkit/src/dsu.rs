//! Minimal union-find used by residue computations and the enumerator.

#[derive(Clone)]
pub(crate) struct Dsu {
    parent: Vec<u32>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, v: u32) -> u32 {
        let mut root = v;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        // Path compression.
        let mut cur = v;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Root at the smaller id so block representatives are minima.
            if ra < rb {
                self.parent[rb as usize] = ra;
            } else {
                self.parent[ra as usize] = rb;
            }
        }
    }

    pub fn component_count(&mut self) -> usize {
        (0..self.parent.len() as u32).filter(|&v| self.find(v) == v).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions_merge_and_roots_are_minima() {
        let mut d = Dsu::new(6);
        assert_eq!(d.component_count(), 6);
        d.union(4, 2);
        d.union(2, 0);
        assert_eq!(d.find(4), 0);
        assert_eq!(d.component_count(), 4);
        d.union(1, 3);
        d.union(5, 3);
        assert_eq!(d.component_count(), 2);
        assert_eq!(d.find(5), 1);
    }
}
