use alloc::collections::BTreeMap;
use core::fmt;

use super::{TyVar, Type};

/// Idempotent substitution on type variables: no bound variable occurs in
/// any range type.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct TypeSubst {
    map: BTreeMap<u32, (TyVar, Type)>,
}

impl TypeSubst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, v: &TyVar) -> Option<&Type> {
        self.get_id(v.id())
    }

    pub fn get_id(&self, id: u32) -> Option<&Type> {
        self.map.get(&id).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TyVar, &Type)> {
        self.map.values().map(|(v, t)| (v, t))
    }

    pub fn apply(&self, ty: &Type) -> Type {
        if self.map.is_empty() {
            return ty.clone();
        }
        ty.map_vars(&mut |v| match self.map.get(&v.id()) {
            Some((_, t)) => t.clone(),
            None => Type::Var(v.clone()),
        })
    }

    /// Adds `v ↦ ty`, keeping the substitution idempotent. The caller is
    /// responsible for the occurs check.
    pub fn bind(&mut self, v: TyVar, ty: Type) {
        let ty = self.apply(&ty);
        debug_assert!(!ty.occurs(v.id()));
        let single = TypeSubst {
            map: BTreeMap::from([(v.id(), (v.clone(), ty.clone()))]),
        };
        for (_, t) in self.map.values_mut() {
            if t.occurs(v.id()) {
                *t = single.apply(t);
            }
        }
        self.map.insert(v.id(), (v, ty));
    }

    /// `other ∘ self`: applying the result equals applying `self`, then
    /// `other`.
    pub fn compose(&self, other: &TypeSubst) -> TypeSubst {
        let mut map: BTreeMap<u32, (TyVar, Type)> = self
            .map
            .iter()
            .map(|(id, (v, t))| (*id, (v.clone(), other.apply(t))))
            .collect();
        for (id, entry) in &other.map {
            map.entry(*id).or_insert_with(|| entry.clone());
        }
        TypeSubst { map }
    }

    pub fn is_idempotent(&self) -> bool {
        self.map
            .values()
            .all(|(_, t)| self.map.keys().all(|id| !t.occurs(*id)))
    }
}

impl fmt::Debug for TypeSubst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.map.values().map(|(v, t)| (Type::Var(v.clone()), t)))
            .finish()
    }
}

impl FromIterator<(TyVar, Type)> for TypeSubst {
    fn from_iter<I: IntoIterator<Item = (TyVar, Type)>>(iter: I) -> Self {
        let mut s = TypeSubst::new();
        for (v, t) in iter {
            s.bind(v, t);
        }
        s
    }
}
