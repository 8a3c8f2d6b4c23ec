// ViewState is a pure projection of the last QueryResponse. The client
// never recomputes counts or availability; it only reshapes what the
// server said into something the renderer can walk.

import type { QueryResponse } from './api'

export interface CategoryView {
  id: number
  name: string
  count: number
}

export interface PanelView {
  name: string
  combinator: 'ANY' | 'ALL'
  available: CategoryView[]
}

export interface ChipView {
  id: number
  name: string
  count: number
  neg: boolean
}

export interface ViewState {
  panels: PanelView[]
  unavailable: { id: number; name: string }[]
  chips: ChipView[]
  items: { id: number; name: string }[]
  itemCount: number
  offset: number
  limit: number
}

export function deriveView(res: QueryResponse): ViewState {
  const nameOf = (id: number) => res.names[String(id)] ?? String(id)
  return {
    panels: res.available.map((g) => ({
      name: g.name,
      combinator: g.combinator,
      available: g.categories.map((c) => ({
        id: c.cat,
        name: nameOf(c.cat),
        count: c.count,
      })),
    })),
    unavailable: res.unavailable.map((id) => ({ id, name: nameOf(id) })),
    chips: res.selected.map((s) => ({
      id: s.cat,
      name: nameOf(s.cat),
      count: s.count,
      neg: s.neg,
    })),
    items: res.items.map((it) => ({ id: it.id, name: it.name })),
    itemCount: res.item_count,
    offset: res.offset,
    limit: res.limit,
  }
}
