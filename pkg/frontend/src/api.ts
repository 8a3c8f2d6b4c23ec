// Typed client for the facetnav HTTP service. Every call is stateless:
// the whole selection travels in the request body, so identical requests
// give byte-identical answers and can be replayed from a URL.

export interface SelectionEntry {
  cat: string | number
  neg?: boolean
}

export interface WireEntry {
  cat: number
  neg: boolean
}

export interface CategoryCount {
  cat: number
  count: number
}

export interface GroupPanel {
  group: number
  name: string
  combinator: 'ANY' | 'ALL'
  categories: CategoryCount[]
}

export interface SelectedEntry {
  cat: number
  count: number
  neg: boolean
}

export interface ItemRef {
  id: number
  name: string
}

export interface QueryResponse {
  selection: WireEntry[]
  item_count: number
  offset: number
  limit: number
  items: ItemRef[]
  available: GroupPanel[]
  unavailable: number[]
  selected: SelectedEntry[]
  names: Record<string, string>
}

export interface TypeaheadResponse {
  accepted: string
  mode: string
  candidate_count: number
  candidates: ItemRef[]
  exact: number[]
  rejected: string[]
  completed_count: number | null
}

export interface MetaResponse {
  fingerprint: string
  n: number
  N: number
  groups: { id: number; name: string; combinator: string }[]
  stats: Record<string, number>
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message)
  }
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>

export class FacetClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async post<T>(
    path: string,
    body: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const res = await this.fetchImpl(this.base + path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
      signal,
    })
    const data = await res.json().catch(() => null)
    if (!res.ok) {
      const err = (data && data.error) || {}
      throw new ApiError(
        res.status,
        err.code || 'error',
        err.message || `HTTP ${res.status}`,
      )
    }
    return data as T
  }

  query(
    selection: SelectionEntry[],
    offset = 0,
    limit = 50,
    signal?: AbortSignal,
  ): Promise<QueryResponse> {
    return this.post<QueryResponse>('/query', { selection, offset, limit }, signal)
  }

  typeahead(
    typed: string,
    mode = 'pi',
    limit = 50,
    signal?: AbortSignal,
  ): Promise<TypeaheadResponse> {
    return this.post<TypeaheadResponse>('/typeahead', { typed, mode, limit }, signal)
  }

  async meta(): Promise<MetaResponse> {
    const res = await this.fetchImpl(this.base + '/meta')
    if (!res.ok) throw new ApiError(res.status, 'error', `HTTP ${res.status}`)
    return (await res.json()) as MetaResponse
  }
}
