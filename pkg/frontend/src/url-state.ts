// Selection <-> URL codec. The view is fully replayable from the query
// string: ?sel=c,a holds one entry per chosen category in click order,
// "-" prefix for negated ones, plus ?off= for the item page offset.

export interface UrlEntry {
  cat: string
  neg: boolean
}

function encodeName(name: string): string {
  // encodeURIComponent leaves "-" alone; escape a leading one by hand so
  // it can't be mistaken for the negation marker
  const enc = encodeURIComponent(name)
  return enc.startsWith('-') ? '%2D' + enc.slice(1) : enc
}

export function encodeSelection(entries: UrlEntry[]): string {
  return entries.map((e) => (e.neg ? '-' : '') + encodeName(e.cat)).join(',')
}

export function decodeSelection(value: string | null): UrlEntry[] {
  if (!value) return []
  return value
    .split(',')
    .filter((tok) => tok.length > 0)
    .map((tok) => {
      const neg = tok.startsWith('-')
      return { cat: decodeURIComponent(neg ? tok.slice(1) : tok), neg }
    })
}

export function toSearch(entries: UrlEntry[], offset = 0): string {
  const params = new URLSearchParams()
  if (entries.length) params.set('sel', encodeSelection(entries))
  if (offset > 0) params.set('off', String(offset))
  const qs = params.toString()
  return qs ? `?${qs}` : ''
}

export function fromSearch(search: string): { entries: UrlEntry[]; offset: number } {
  const params = new URLSearchParams(search)
  const offset = Number(params.get('off') ?? '0')
  return {
    entries: decodeSelection(params.get('sel')),
    offset: Number.isFinite(offset) && offset > 0 ? Math.trunc(offset) : 0,
  }
}
