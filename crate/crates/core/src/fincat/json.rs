use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{CategoryError, CategoryTables, FinCategory, Morphism};

/// JSON shape of a category: string ids throughout.
///
/// `comp` lists `[g, f, g∘f]` triples. Composites involving an identity may be
/// omitted; they are filled in by the unit laws.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identity: BTreeMap<String, String>,
    #[serde(default)]
    pub comp: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

impl RawCategory {
    pub fn to_tables(&self) -> Result<CategoryTables, CategoryError> {
        let mut obj_index = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_index.insert(o.as_str(), i).is_some() {
                return Err(CategoryError::DuplicateName(o.clone()));
            }
        }
        let lookup_obj = |s: &str| {
            obj_index
                .get(s)
                .copied()
                .ok_or_else(|| CategoryError::UnknownObject(s.to_string()))
        };
        let mut mor_index = HashMap::new();
        let mut morphisms = Vec::with_capacity(self.morphisms.len());
        for (i, m) in self.morphisms.iter().enumerate() {
            if mor_index.insert(m.id.as_str(), i).is_some() {
                return Err(CategoryError::DuplicateName(m.id.clone()));
            }
            morphisms.push(Morphism { name: m.id.clone(), dom: lookup_obj(&m.dom)?, cod: lookup_obj(&m.cod)? });
        }
        let lookup_mor = |s: &str| {
            mor_index
                .get(s)
                .copied()
                .ok_or_else(|| CategoryError::UnknownMorphism(s.to_string()))
        };
        let mut identity = Vec::with_capacity(self.objects.len());
        for o in &self.objects {
            let name = self
                .identity
                .get(o)
                .ok_or_else(|| CategoryError::UnknownMorphism(format!("identity of {o}")))?;
            identity.push(lookup_mor(name)?);
        }
        let mut comp = Vec::with_capacity(self.comp.len());
        let mut given = std::collections::HashSet::new();
        for [g, f, gf] in &self.comp {
            let t = (lookup_mor(g)?, lookup_mor(f)?, lookup_mor(gf)?);
            given.insert((t.0, t.1));
            comp.push(t);
        }
        for (f, m) in morphisms.iter().enumerate() {
            if let Some(&idc) = identity.get(m.cod) {
                if given.insert((idc, f)) {
                    comp.push((idc, f, f));
                }
            }
            if let Some(&idd) = identity.get(m.dom) {
                if given.insert((f, idd)) {
                    comp.push((f, idd, f));
                }
            }
        }
        Ok(CategoryTables { objects: self.objects.clone(), morphisms, identity, comp })
    }

    pub fn build(&self) -> Result<FinCategory, CategoryError> {
        FinCategory::new(self.to_tables()?)
    }
}

impl From<&FinCategory> for RawCategory {
    fn from(c: &FinCategory) -> Self {
        let t = c.tables();
        let name = |f: usize| t.morphisms[f].name.clone();
        RawCategory {
            objects: t.objects.clone(),
            morphisms: t
                .morphisms
                .iter()
                .map(|m| RawMorphism {
                    id: m.name.clone(),
                    dom: t.objects[m.dom].clone(),
                    cod: t.objects[m.cod].clone(),
                })
                .collect(),
            identity: t
                .objects
                .iter()
                .enumerate()
                .map(|(x, o)| (o.clone(), name(t.identity[x])))
                .collect(),
            comp: t
                .comp
                .iter()
                .map(|&(g, f, gf)| [name(g), name(f), name(gf)])
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_chain_without_identity_composites() {
        let json = r#"{
            "objects": ["0", "1"],
            "morphisms": [{"id":"i0","dom":"0","cod":"0"},{"id":"i1","dom":"1","cod":"1"},{"id":"u","dom":"0","cod":"1"}],
            "identity": {"0":"i0","1":"i1"},
            "comp": []
        }"#;
        let raw: RawCategory = serde_json::from_str(json).unwrap();
        let c = raw.build().unwrap();
        assert_eq!(c.num_morphisms(), 3);
        let back = RawCategory::from(&c);
        assert_eq!(back.build().unwrap(), c);
    }

    #[test]
    fn unknown_names_are_rejected() {
        let raw = RawCategory {
            objects: vec!["A".into()],
            morphisms: vec![RawMorphism { id: "f".into(), dom: "A".into(), cod: "B".into() }],
            identity: BTreeMap::new(),
            comp: vec![],
        };
        assert!(matches!(raw.build(), Err(CategoryError::UnknownObject(_))));
    }
}
