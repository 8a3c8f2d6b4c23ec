// Browser bootstrap: same-origin service, real window.

import { FacetClient } from './api'
import { FacetApp } from './app'

const root = document.getElementById('app')
if (root) {
  const app = new FacetApp(root, new FacetClient(''), window)
  void app.start()
}
