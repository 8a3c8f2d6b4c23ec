// Controller. One logical UI thread: every user action replays the whole
// selection through POST /query, at most one query in flight, stale
// responses dropped (last write wins). The URL always encodes the applied
// selection, so reload and back/forward are plain replays.

import { ApiError, FacetClient, TypeaheadResponse } from './api'
import { renderTypeahead, renderView } from './render'
import { fromSearch, toSearch, UrlEntry } from './url-state'
import { deriveView } from './view'

export interface WindowLike {
  location: { pathname: string; search: string }
  history: { pushState(data: unknown, unused: string, url?: string): void }
  addEventListener(type: string, listener: () => void): void
}

const PAGE_LIMIT = 50

export class FacetApp {
  private entries: UrlEntry[] = []
  private offset = 0
  private applied: UrlEntry[] = []
  private appliedOffset = 0

  private seq = 0
  private inflight: AbortController | null = null
  private taSeq = 0
  private taInflight: AbortController | null = null
  private pending = new Set<Promise<void>>()

  private availableNames = new Set<string>()
  private selectedNames = new Set<string>()
  private lastTypeahead: TypeaheadResponse | null = null
  private completedMode = false

  private banner: HTMLElement
  private facetRoot: HTMLElement
  private taInput: HTMLInputElement
  private taBox: HTMLElement

  constructor(
    private root: HTMLElement,
    private client: FacetClient,
    private win: WindowLike,
  ) {
    const doc = root.ownerDocument
    this.banner = doc.createElement('div')
    this.banner.className = 'banner'
    this.banner.hidden = true
    this.facetRoot = doc.createElement('div')
    this.facetRoot.className = 'facet-root'

    const ta = doc.createElement('div')
    ta.className = 'typeahead'
    this.taInput = doc.createElement('input')
    this.taInput.className = 'ta-input'
    this.taInput.addEventListener('input', () => {
      this.completedMode = false
      this.track(this.replayTypeahead(this.taInput.value))
    })
    const completeBtn = doc.createElement('button')
    completeBtn.className = 'ta-complete'
    completeBtn.textContent = 'complete'
    completeBtn.addEventListener('click', () => {
      // negation semantics live on the server; this only surfaces the
      // already-reported completed count as the active reading
      if (this.lastTypeahead && this.lastTypeahead.completed_count !== null) {
        this.completedMode = true
        renderTypeahead(this.taBox, this.lastTypeahead, true)
      }
    })
    this.taBox = doc.createElement('div')
    this.taBox.className = 'ta-box'
    ta.appendChild(this.taInput)
    ta.appendChild(completeBtn)
    ta.appendChild(this.taBox)

    root.appendChild(this.banner)
    root.appendChild(this.facetRoot)
    root.appendChild(ta)

    this.win.addEventListener('popstate', () => {
      const state = fromSearch(this.win.location.search)
      this.entries = state.entries
      this.offset = state.offset
      this.track(this.refresh(false))
    })
  }

  start(): Promise<void> {
    const state = fromSearch(this.win.location.search)
    this.entries = state.entries
    this.offset = state.offset
    const p = this.refresh(false)
    this.track(p)
    return p
  }

  async idle(): Promise<void> {
    while (this.pending.size) {
      await Promise.allSettled([...this.pending])
    }
  }

  select(name: string): void {
    // pre: rendered available; anything else issues no request
    if (!this.availableNames.has(name)) return
    this.entries = [...this.entries, { cat: name, neg: false }]
    this.offset = 0
    this.track(this.refresh(true))
  }

  deselect(name: string): void {
    if (!this.selectedNames.has(name)) return
    this.entries = this.entries.filter((e) => e.cat !== name)
    this.offset = 0
    this.track(this.refresh(true))
  }

  toggleNegation(name: string): void {
    if (!this.selectedNames.has(name)) return
    this.entries = this.entries.map((e) =>
      e.cat === name ? { cat: e.cat, neg: !e.neg } : e,
    )
    this.offset = 0
    this.track(this.refresh(true))
  }

  page(offset: number): void {
    this.offset = offset
    this.track(this.refresh(true))
  }

  currentSearch(): string {
    return toSearch(this.applied, this.appliedOffset)
  }

  private track(p: Promise<void>): void {
    this.pending.add(p)
    void p.finally(() => this.pending.delete(p))
  }

  private async refresh(pushUrl: boolean): Promise<void> {
    const seq = ++this.seq
    this.inflight?.abort()
    const controller = new AbortController()
    this.inflight = controller
    const entries = this.entries
    const offset = this.offset
    try {
      const res = await this.client.query(
        entries.map((e) => ({ cat: e.cat, neg: e.neg })),
        offset,
        PAGE_LIMIT,
        controller.signal,
      )
      if (seq !== this.seq) return // a newer request already won
      this.applied = entries
      this.appliedOffset = offset
      this.banner.hidden = true
      this.banner.textContent = ''

      const view = deriveView(res)
      this.availableNames = new Set(
        view.panels.flatMap((p) => p.available.map((c) => c.name)),
      )
      this.selectedNames = new Set(view.chips.map((c) => c.name))
      renderView(this.facetRoot, view, {
        onSelect: (n) => this.select(n),
        onDeselect: (n) => this.deselect(n),
        onToggleNeg: (n) => this.toggleNegation(n),
        onPage: (off) => this.page(off),
      })
      if (pushUrl) {
        const url = this.win.location.pathname + toSearch(entries, offset)
        this.win.history.pushState(null, '', url)
      }
    } catch (err) {
      if (controller.signal.aborted || seq !== this.seq) return
      // failed round trip: surface it, keep the rendered view, roll the
      // selection back to what that view shows
      this.entries = [...this.applied]
      this.offset = this.appliedOffset
      this.showError(err)
    }
  }

  private async replayTypeahead(typed: string): Promise<void> {
    const seq = ++this.taSeq
    this.taInflight?.abort()
    const controller = new AbortController()
    this.taInflight = controller
    try {
      const res = await this.client.typeahead(typed, 'pi', PAGE_LIMIT, controller.signal)
      if (seq !== this.taSeq) return
      this.lastTypeahead = res
      this.banner.hidden = true
      const last = typed.slice(-1).toLowerCase()
      const flashed = last !== '' && res.rejected.includes(last)
      this.taInput.classList.toggle('flash', flashed)
      renderTypeahead(this.taBox, res, this.completedMode)
    } catch (err) {
      if (controller.signal.aborted || seq !== this.taSeq) return
      this.showError(err) // input keeps its value; candidate list stays
    }
  }

  private showError(err: unknown): void {
    const message =
      err instanceof ApiError
        ? `${err.code}: ${err.message}`
        : err instanceof Error
          ? err.message
          : String(err)
    this.banner.textContent = message
    this.banner.hidden = false
  }
}
