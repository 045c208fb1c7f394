import { ApiClient, FetchTransport } from './api';
import { WizardEngine } from './engine';
import { render } from './view';

declare global {
  interface Window {
    TYPEDMILP_API?: string;
  }
}

const baseUrl = window.TYPEDMILP_API ?? 'http://127.0.0.1:8000';
const engine = new WizardEngine(new ApiClient(new FetchTransport(baseUrl)));
const root = document.getElementById('app');
if (!root) {
  throw new Error('missing #app mount point');
}
engine.subscribe(() => render(root, engine));
render(root, engine);
void engine.start();
