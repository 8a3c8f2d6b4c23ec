// DOM construction. Unavailable categories stay on screen as disabled
// buttons (distinguished, never hidden) so the vocabulary keeps its shape
// while the user narrows.

import type { TypeaheadResponse } from './api'
import type { ViewState } from './view'

export interface ViewHandlers {
  onSelect(name: string): void
  onDeselect(name: string): void
  onToggleNeg(name: string): void
  onPage(offset: number): void
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag)
  if (className) node.className = className
  if (text !== undefined) node.textContent = text
  return node
}

export function renderView(
  root: HTMLElement,
  view: ViewState,
  h: ViewHandlers,
): void {
  const doc = root.ownerDocument
  root.textContent = ''

  const chips = el(doc, 'div', 'chips')
  for (const chip of view.chips) {
    const span = el(doc, 'span', chip.neg ? 'chip neg' : 'chip')
    span.dataset.cat = chip.name
    span.appendChild(
      el(doc, 'span', 'chip-label', `${chip.neg ? 'not ' : ''}${chip.name} (${chip.count})`),
    )
    const negBtn = el(doc, 'button', 'chip-neg', '¬')
    negBtn.addEventListener('click', () => h.onToggleNeg(chip.name))
    const rmBtn = el(doc, 'button', 'chip-remove', '×')
    rmBtn.addEventListener('click', () => h.onDeselect(chip.name))
    span.appendChild(negBtn)
    span.appendChild(rmBtn)
    chips.appendChild(span)
  }
  root.appendChild(chips)

  const panels = el(doc, 'div', 'panels')
  for (const panel of view.panels) {
    const section = el(doc, 'section', 'panel')
    const head = el(doc, 'h3', undefined, panel.name + ' ')
    head.appendChild(el(doc, 'span', 'badge', panel.combinator))
    section.appendChild(head)
    for (const cat of panel.available) {
      const btn = el(doc, 'button', 'cat available', `${cat.name} ${cat.count}`)
      btn.dataset.cat = cat.name
      btn.addEventListener('click', () => h.onSelect(cat.name))
      section.appendChild(btn)
    }
    panels.appendChild(section)
  }
  root.appendChild(panels)

  const offSection = el(doc, 'section', 'unavailable')
  for (const cat of view.unavailable) {
    const btn = el(doc, 'button', 'cat unavailable', `${cat.name} 0`)
    btn.dataset.cat = cat.name
    btn.disabled = true
    btn.setAttribute('aria-disabled', 'true')
    offSection.appendChild(btn)
  }
  root.appendChild(offSection)

  const items = el(doc, 'section', 'items')
  const list = el(doc, 'ol')
  for (const item of view.items) {
    const li = el(doc, 'li', 'item', item.name)
    li.dataset.id = String(item.id)
    list.appendChild(li)
  }
  items.appendChild(list)

  if (view.itemCount > view.limit) {
    const pager = el(doc, 'div', 'pager')
    const from = view.offset + 1
    const to = Math.min(view.offset + view.limit, view.itemCount)
    const prev = el(doc, 'button', 'page-prev', 'prev')
    prev.disabled = view.offset === 0
    prev.addEventListener('click', () =>
      h.onPage(Math.max(0, view.offset - view.limit)),
    )
    const next = el(doc, 'button', 'page-next', 'next')
    next.disabled = to >= view.itemCount
    next.addEventListener('click', () => h.onPage(view.offset + view.limit))
    pager.appendChild(prev)
    pager.appendChild(el(doc, 'span', 'page-range', `${from}-${to} of ${view.itemCount}`))
    pager.appendChild(next)
    items.appendChild(pager)
  }
  root.appendChild(items)
}

export function renderTypeahead(
  box: HTMLElement,
  res: TypeaheadResponse,
  completed: boolean,
): void {
  const doc = box.ownerDocument
  box.textContent = ''

  const exact = new Set(res.exact)
  const list = el(doc, 'ul', 'ta-candidates')
  for (const cand of res.candidates) {
    const li = el(
      doc,
      'li',
      exact.has(cand.id) ? 'ta-candidate exact' : 'ta-candidate',
      cand.name,
    )
    li.dataset.id = String(cand.id)
    list.appendChild(li)
  }
  box.appendChild(list)

  const meta = el(doc, 'div', 'ta-meta')
  meta.appendChild(
    el(doc, 'span', 'ta-count', `${res.candidate_count} candidates`),
  )
  if (res.rejected.length) {
    meta.appendChild(
      el(doc, 'span', 'ta-rejected', `no matches for: ${res.rejected.join(' ')}`),
    )
  }
  if (res.completed_count !== null) {
    meta.appendChild(
      el(
        doc,
        'span',
        completed ? 'ta-completed active' : 'ta-completed',
        `complete → ${res.completed_count}`,
      ),
    )
  }
  box.appendChild(meta)
}
