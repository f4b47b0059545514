import { App } from './app.js';

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const board = byId<HTMLElement>('board') as unknown as SVGSVGElement;
  const app = new App(
    {
      board,
      status: byId('status'),
      banner: byId('banner'),
      log: byId('log'),
    },
    (byId<HTMLInputElement>('base-url')).value,
  );

  byId<HTMLInputElement>('base-url').addEventListener('change', (evt) => {
    app.setBaseUrl((evt.target as HTMLInputElement).value);
  });

  byId<HTMLFormElement>('setup').addEventListener('submit', (evt) => {
    evt.preventDefault();
    const seedRaw = byId<HTMLInputElement>('seed').value.trim();
    void app.newGame({
      size: Number(byId<HTMLSelectElement>('size').value),
      level: Number(byId<HTMLSelectElement>('level').value),
      white: byId<HTMLSelectElement>('white').value,
      black: byId<HTMLSelectElement>('black').value,
      ...(seedRaw === '' ? {} : { seed: Number(seedRaw) }),
    });
  });
}

main();
