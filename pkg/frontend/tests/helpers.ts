import { FacetClient, FetchLike } from '../src/api'
import { FacetApp, WindowLike } from '../src/app'

export const BASE = 'http://127.0.0.1:8317'

// window stand-in: real URL bookkeeping, no navigation side effects
export function fakeWindow(search = ''): WindowLike & {
  popstateListeners: (() => void)[]
  goto(search: string): void
} {
  const listeners: (() => void)[] = []
  const win = {
    location: { pathname: '/', search },
    history: {
      pushState(_data: unknown, _unused: string, url?: string) {
        if (url === undefined) return
        const q = url.indexOf('?')
        win.location.search = q >= 0 ? url.slice(q) : ''
      },
    },
    addEventListener(type: string, listener: () => void) {
      if (type === 'popstate') listeners.push(listener)
    },
    popstateListeners: listeners,
    goto(next: string) {
      win.location.search = next
      for (const fn of listeners) fn()
    },
  }
  return win
}

export interface Mounted {
  root: HTMLElement
  app: FacetApp
  win: ReturnType<typeof fakeWindow>
}

export function mount(search = '', fetchImpl?: FetchLike): Mounted {
  const root = document.createElement('div')
  document.body.appendChild(root)
  const win = fakeWindow(search)
  const client = new FacetClient(BASE, fetchImpl)
  const app = new FacetApp(root, client, win)
  return { root, app, win }
}

export async function mountAndStart(
  search = '',
  fetchImpl?: FetchLike,
): Promise<Mounted> {
  const m = mount(search, fetchImpl)
  await m.app.start()
  await m.app.idle()
  return m
}

export function catButton(root: HTMLElement, name: string): HTMLButtonElement {
  const all = [...root.querySelectorAll('button.cat')] as HTMLButtonElement[]
  const hit = all.find((b) => b.dataset.cat === name)
  if (!hit) throw new Error(`no category button for "${name}"`)
  return hit
}

export function itemNames(root: HTMLElement): string[] {
  return [...root.querySelectorAll('li.item')].map((li) => li.textContent ?? '')
}

export function availableNames(root: HTMLElement): string[] {
  return [...root.querySelectorAll('button.cat.available')].map(
    (b) => (b as HTMLButtonElement).dataset.cat ?? '',
  )
}

export function unavailableNames(root: HTMLElement): string[] {
  return [...root.querySelectorAll('button.cat.unavailable')].map(
    (b) => (b as HTMLButtonElement).dataset.cat ?? '',
  )
}

export async function clickCategory(m: Mounted, name: string): Promise<void> {
  catButton(m.root, name).click()
  await m.app.idle()
}

export function typeaheadInput(root: HTMLElement): HTMLInputElement {
  const input = root.querySelector('input.ta-input') as HTMLInputElement | null
  if (!input) throw new Error('typeahead input not rendered')
  return input
}

export async function typeString(m: Mounted, value: string): Promise<void> {
  // replay one keystroke at a time, like a person typing
  const input = typeaheadInput(m.root)
  input.value = ''
  for (const ch of value) {
    input.value = input.value + ch
    input.dispatchEvent(new Event('input', { bubbles: true }))
    await m.app.idle()
  }
}

export function candidateNames(root: HTMLElement): string[] {
  return [...root.querySelectorAll('li.ta-candidate')].map(
    (li) => li.textContent ?? '',
  )
}

export function viewHtml(root: HTMLElement): string {
  const facet = root.querySelector('.facet-root')
  return facet ? facet.innerHTML : ''
}
